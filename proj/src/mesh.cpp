#include "qmini/mesh.hpp"

#include <stdexcept>
#include <string>

namespace qmini {

Mesh::Mesh(int n, double shear) : n_(n), shear_(shear) {
  if (n < 1) throw std::invalid_argument("mesh: n must be >= 1");
  if (!(shear >= 0.0 && shear < 0.5)) throw std::invalid_argument("mesh: shear must be in [0, 0.5)");
  const int np = n + 1;
  vertices_.reserve(static_cast<std::size_t>(np * np));
  boundary_.reserve(static_cast<std::size_t>(np * np));
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      const double y = static_cast<double>(j) / n;
      vertices_.push_back({static_cast<double>(i) / n + shear * y, y});
      boundary_.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  elements_.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = j * np + i;
      elements_.push_back({ll, ll + 1, ll + np + 1, ll + np});
    }
  }
}

Mesh build_structured_mesh(int n, double shear) { return Mesh(n, shear); }

int subdivisions_for_level(int level) {
  if (level < 0 || level > 12) throw std::invalid_argument("level out of range: " + std::to_string(level));
  return 1 << (level + 1);
}

ElementGeometry element_geometry(const Mesh& mesh, int k) {
  if (k < 0 || k >= mesh.element_count()) throw std::out_of_range("element index out of range");
  const auto& e = mesh.element(k);
  const Point& p0 = mesh.vertex(e[0]);
  const Point& p1 = mesh.vertex(e[1]);
  const Point& p3 = mesh.vertex(e[3]);
  ElementGeometry g;
  g.offset = p0;
  g.jacobian << p1.x - p0.x, p3.x - p0.x,
                p1.y - p0.y, p3.y - p0.y;
  g.det = g.jacobian.determinant();
  if (g.det <= 1e-14) throw std::domain_error("degenerate element " + std::to_string(k));
  g.inverse_transpose = g.jacobian.inverse().transpose();
  return g;
}

DofMap::DofMap(const Mesh& mesh)
    : vertex_count_(mesh.vertex_count()),
      velocity_scalar_count_(mesh.vertex_count() + mesh.element_count()),
      pressure_count_(mesh.vertex_count()) {
  interior_index_.assign(static_cast<std::size_t>(velocity_scalar_count_), -1);
  for (int s = 0; s < velocity_scalar_count_; ++s) {
    if (s >= vertex_count_ || !mesh.is_boundary_vertex(s)) {
      interior_index_[static_cast<std::size_t>(s)] = interior_scalar_count_++;
    }
  }
}

std::array<int, 5> DofMap::element_velocity_dofs(const Mesh& mesh, int k) const {
  const auto& e = mesh.element(k);
  return {e[0], e[1], e[2], e[3], bubble_dof(k)};
}

DofMap build_dof_maps(const Mesh& mesh) { return DofMap(mesh); }

}  // namespace qmini
