#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace qmini {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Structured n x n mesh of the unit square, optionally sheared into a
/// parallelogram of equal area. Vertices are numbered lexicographically
/// (x fastest), elements likewise; each element lists its vertices
/// counterclockwise starting at the lower-left one.
class Mesh {
 public:
  Mesh(int n, double shear);

  int subdivisions() const { return n_; }
  double shear() const { return shear_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int element_count() const { return static_cast<int>(elements_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& elements() const { return elements_; }
  const std::vector<bool>& boundary_vertex_flags() const { return boundary_; }

  const Point& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::array<int, 4>& element(int k) const { return elements_[static_cast<std::size_t>(k)]; }
  bool is_boundary_vertex(int v) const { return boundary_[static_cast<std::size_t>(v)]; }

 private:
  int n_;
  double shear_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> elements_;
  std::vector<bool> boundary_;
};

/// Builds the structured mesh. Requires n >= 1 and shear in [0, 0.5).
Mesh build_structured_mesh(int n, double shear = 0.0);

/// Number of subdivisions per side used at refinement level l: 2^(l+1).
int subdivisions_for_level(int level);

/// Affine map x = jacobian * xi + offset from (0,1)^2 onto an element.
struct ElementGeometry {
  Eigen::Matrix2d jacobian;
  Point offset;
  double det = 0.0;
  Eigen::Matrix2d inverse_transpose;

  Point map(double xi, double eta) const {
    return {offset.x + jacobian(0, 0) * xi + jacobian(0, 1) * eta,
            offset.y + jacobian(1, 0) * xi + jacobian(1, 1) * eta};
  }
};

/// Throws std::domain_error for a degenerate element (det <= 1e-14).
ElementGeometry element_geometry(const Mesh& mesh, int k);

/// Degree-of-freedom numbering.
///
/// Scalar velocity dofs: vertices (mesh numbering) then one bubble per element.
/// Vector velocity dofs are blocked by component: component c of scalar dof s
/// is c * velocity_scalar_count + s. Pressure dofs are the vertices.
/// Interior (reduced) numbering drops boundary vertex dofs and keeps order.
class DofMap {
 public:
  explicit DofMap(const Mesh& mesh);

  int velocity_scalar_count() const { return velocity_scalar_count_; }
  int velocity_vector_count() const { return 2 * velocity_scalar_count_; }
  int pressure_count() const { return pressure_count_; }
  int interior_scalar_count() const { return interior_scalar_count_; }
  int interior_vector_count() const { return 2 * interior_scalar_count_; }

  int bubble_dof(int element) const { return vertex_count_ + element; }
  bool is_bubble_dof(int scalar_dof) const { return scalar_dof >= vertex_count_; }

  /// Reduced index of a scalar dof, or -1 for a boundary vertex.
  int interior_index(int scalar_dof) const {
    return interior_index_[static_cast<std::size_t>(scalar_dof)];
  }
  const std::vector<int>& interior_velocity_index() const { return interior_index_; }

  int vector_dof(int component, int scalar_dof) const {
    return component * velocity_scalar_count_ + scalar_dof;
  }
  /// Reduced vector index, or -1 for a boundary dof.
  int interior_vector_dof(int component, int scalar_dof) const {
    const int r = interior_index(scalar_dof);
    return r < 0 ? -1 : component * interior_scalar_count_ + r;
  }

  /// The element's four vertex dofs (counterclockwise) then its bubble dof.
  std::array<int, 5> element_velocity_dofs(const Mesh& mesh, int k) const;

 private:
  int vertex_count_;
  int velocity_scalar_count_;
  int pressure_count_;
  int interior_scalar_count_ = 0;
  std::vector<int> interior_index_;
};

DofMap build_dof_maps(const Mesh& mesh);

}  // namespace qmini
