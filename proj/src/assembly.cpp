#include "qmini/assembly.hpp"

#include "qmini/simd/kernels.hpp"

#include <stdexcept>

namespace qmini {

namespace {

using Triplets = std::vector<Eigen::Triplet<double, int>>;
constexpr int kNv = ReferenceTabulation::kVelocityFunctions;
constexpr int kNp = ReferenceTabulation::kPressureFunctions;

// Per-element quadrature data: weights scaled by |det|, basis values and
// physical gradients at the mapped points.
struct ElementData {
  std::vector<double> weights;
  std::array<std::vector<double>, kNv> gx;
  std::array<std::vector<double>, kNv> gy;

  void fill(const ReferenceTabulation& tab, const ElementGeometry& geom) {
    const std::size_t nq = tab.rule.size();
    weights.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) weights[q] = geom.det * tab.rule.weights[q];
    const Eigen::Matrix2d& g = geom.inverse_transpose;
    for (int f = 0; f < kNv; ++f) {
      auto& x = gx[static_cast<std::size_t>(f)];
      auto& y = gy[static_cast<std::size_t>(f)];
      const auto& dxi = tab.dxi[static_cast<std::size_t>(f)];
      const auto& deta = tab.deta[static_cast<std::size_t>(f)];
      x.resize(nq);
      y.resize(nq);
      for (std::size_t q = 0; q < nq; ++q) {
        x[q] = g(0, 0) * dxi[q] + g(0, 1) * deta[q];
        y[q] = g(1, 0) * dxi[q] + g(1, 1) * deta[q];
      }
    }
  }
};

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Adds the element's scalar stiffness (scale_k) and mass (scale_m) to both
// component blocks.
SparseMatrix assemble_velocity_block(const Mesh& mesh, const DofMap& dofs, BubbleKind kind,
                                     double scale_k, double scale_m, int order) {
  const auto tab = tabulate(kind, gauss_rule(order == 0 ? assembly_quadrature_order(kind) : order));
  const int ms = dofs.velocity_scalar_count();
  Triplets triplets;
  triplets.reserve(idx(mesh.element_count()) * kNv * kNv * 2);
  ElementData data;
  for (int k = 0; k < mesh.element_count(); ++k) {
    data.fill(tab, element_geometry(mesh, k));
    const auto local = dofs.element_velocity_dofs(mesh, k);
    for (int i = 0; i < kNv; ++i) {
      for (int j = 0; j < kNv; ++j) {
        double v = 0.0;
        if (scale_k != 0.0) {
          v += scale_k * (simd::weighted_dot(data.weights, data.gx[idx(i)], data.gx[idx(j)]) +
                          simd::weighted_dot(data.weights, data.gy[idx(i)], data.gy[idx(j)]));
        }
        if (scale_m != 0.0) {
          v += scale_m * simd::weighted_dot(data.weights, tab.value[idx(i)], tab.value[idx(j)]);
        }
        for (int c = 0; c < 2; ++c) {
          triplets.emplace_back(c * ms + local[idx(i)], c * ms + local[idx(j)], v);
        }
      }
    }
  }
  return from_triplets(2 * ms, 2 * ms, triplets);
}

}  // namespace

SparseMatrix assemble_viscous_with_order(const Mesh& mesh, const DofMap& dofs, BubbleKind kind,
                                         double nu, int order) {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  return assemble_velocity_block(mesh, dofs, kind, nu, 0.0, order);
}

SparseMatrix assemble_viscous(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, double nu) {
  return assemble_viscous_with_order(mesh, dofs, kind, nu, 0);
}

SparseMatrix assemble_velocity_mass(const Mesh& mesh, const DofMap& dofs, BubbleKind kind) {
  return assemble_velocity_block(mesh, dofs, kind, 0.0, 1.0, 0);
}

SparseMatrix assemble_velocity_gram(const Mesh& mesh, const DofMap& dofs, BubbleKind kind) {
  return assemble_velocity_block(mesh, dofs, kind, 1.0, 1.0, 0);
}

SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& dofs, BubbleKind kind) {
  const auto tab = tabulate(kind, gauss_rule(assembly_quadrature_order(kind)));
  const int ms = dofs.velocity_scalar_count();
  Triplets triplets;
  triplets.reserve(idx(mesh.element_count()) * kNp * kNv * 2);
  ElementData data;
  for (int k = 0; k < mesh.element_count(); ++k) {
    data.fill(tab, element_geometry(mesh, k));
    const auto local = dofs.element_velocity_dofs(mesh, k);
    const auto& vertices = mesh.element(k);
    for (int j = 0; j < kNp; ++j) {
      const auto& psi = tab.value[idx(j)];
      for (int i = 0; i < kNv; ++i) {
        triplets.emplace_back(vertices[idx(j)], local[idx(i)],
                              simd::weighted_dot(data.weights, data.gx[idx(i)], psi));
        triplets.emplace_back(vertices[idx(j)], ms + local[idx(i)],
                              simd::weighted_dot(data.weights, data.gy[idx(i)], psi));
      }
    }
  }
  return from_triplets(dofs.pressure_count(), 2 * ms, triplets);
}

SparseMatrix assemble_pressure_mass(const Mesh& mesh, const DofMap& dofs) {
  // Bubble choice is irrelevant for the hats.
  const auto tab = tabulate(BubbleKind::Standard, gauss_rule(4));
  Triplets triplets;
  triplets.reserve(idx(mesh.element_count()) * kNp * kNp);
  ElementData data;
  for (int k = 0; k < mesh.element_count(); ++k) {
    data.fill(tab, element_geometry(mesh, k));
    const auto& vertices = mesh.element(k);
    for (int i = 0; i < kNp; ++i) {
      for (int j = 0; j < kNp; ++j) {
        triplets.emplace_back(vertices[idx(i)], vertices[idx(j)],
                              simd::weighted_dot(data.weights, tab.value[idx(i)], tab.value[idx(j)]));
      }
    }
  }
  return from_triplets(dofs.pressure_count(), dofs.pressure_count(), triplets);
}

Vector assemble_load(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, const VectorField& f) {
  const auto tab = tabulate(kind, gauss_rule(kLoadQuadratureOrder));
  const int ms = dofs.velocity_scalar_count();
  const std::array<NumericPolynomial, 2> fn = {NumericPolynomial(f[0]), NumericPolynomial(f[1])};
  const std::size_t nq = tab.rule.size();
  Vector load = Vector::Zero(2 * ms);
  std::vector<double> weights(nq);
  std::array<std::vector<double>, 2> fq = {std::vector<double>(nq), std::vector<double>(nq)};
  for (int k = 0; k < mesh.element_count(); ++k) {
    const auto geom = element_geometry(mesh, k);
    for (std::size_t q = 0; q < nq; ++q) {
      weights[q] = geom.det * tab.rule.weights[q];
      const Point p = geom.map(tab.rule.points[q][0], tab.rule.points[q][1]);
      fq[0][q] = fn[0](p.x, p.y);
      fq[1][q] = fn[1](p.x, p.y);
    }
    const auto local = dofs.element_velocity_dofs(mesh, k);
    for (int i = 0; i < kNv; ++i) {
      for (int c = 0; c < 2; ++c) {
        load[c * ms + local[idx(i)]] += simd::weighted_dot(weights, fq[idx(c)], tab.value[idx(i)]);
      }
    }
  }
  return load;
}

Vector assemble_interpolated_load(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, const VectorField& f) {
  const int ms = dofs.velocity_scalar_count();
  Vector nodal = Vector::Zero(2 * ms);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Point p = mesh.vertex(v);
    nodal[v] = evaluate(f[0], p.x, p.y);
    nodal[ms + v] = evaluate(f[1], p.x, p.y);
  }
  return assemble_velocity_mass(mesh, dofs, kind) * nodal;
}

FullSystem assemble_stokes(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, double nu,
                           const VectorField& f, LoadRule load) {
  FullSystem s;
  s.A = assemble_viscous(mesh, dofs, kind, nu);
  s.B = assemble_divergence(mesh, dofs, kind);
  s.Mp = assemble_pressure_mass(mesh, dofs);
  s.Gv = assemble_velocity_gram(mesh, dofs, kind);
  s.load = load == LoadRule::Quadrature ? assemble_load(mesh, dofs, kind, f)
                                         : assemble_interpolated_load(mesh, dofs, kind, f);
  return s;
}

namespace {

// Restricts rows and/or columns of a full-numbering matrix through `map`
// (-1 = dropped).
SparseMatrix restrict_matrix(const SparseMatrix& m, const std::vector<int>* row_map,
                             const std::vector<int>* col_map, int rows, int cols) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int r = 0; r < m.outerSize(); ++r) {
    const int rr = row_map ? (*row_map)[idx(r)] : r;
    if (rr < 0) continue;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      const int cc = col_map ? (*col_map)[idx(static_cast<int>(it.col()))] : static_cast<int>(it.col());
      if (cc < 0) continue;
      t.emplace_back(rr, cc, it.value());
    }
  }
  return from_triplets(rows, cols, t);
}

}  // namespace

SaddleSystem apply_dirichlet(const FullSystem& full, const Mesh& mesh, const DofMap& dofs,
                             const VectorField& g) {
  const int ms = dofs.velocity_scalar_count();
  const int mi = dofs.interior_vector_count();
  std::vector<int> full_to_interior(idx(2 * ms), -1);
  SaddleSystem s;
  s.interior_to_full.resize(idx(mi));
  s.boundary_values = Vector::Zero(2 * ms);
  const std::array<NumericPolynomial, 2> gn = {NumericPolynomial(g[0]), NumericPolynomial(g[1])};
  for (int c = 0; c < 2; ++c) {
    for (int sdof = 0; sdof < ms; ++sdof) {
      const int full_index = dofs.vector_dof(c, sdof);
      const int reduced = dofs.interior_vector_dof(c, sdof);
      if (reduced >= 0) {
        full_to_interior[idx(full_index)] = reduced;
        s.interior_to_full[idx(reduced)] = full_index;
      } else {
        const Point& p = mesh.vertex(sdof);
        s.boundary_values[full_index] = gn[idx(c)](p.x, p.y);
      }
    }
  }

  s.A = restrict_matrix(full.A, &full_to_interior, &full_to_interior, mi, mi);
  s.Gv = restrict_matrix(full.Gv, &full_to_interior, &full_to_interior, mi, mi);
  s.B = restrict_matrix(full.B, nullptr, &full_to_interior, dofs.pressure_count(), mi);
  s.Mp = full.Mp;

  s.load.resize(mi);
  for (int r = 0; r < mi; ++r) s.load[r] = full.load[s.interior_to_full[idx(r)]];

  const Vector a_lift = full.A * s.boundary_values;
  s.lift_velocity.resize(mi);
  for (int r = 0; r < mi; ++r) s.lift_velocity[r] = -a_lift[s.interior_to_full[idx(r)]];
  s.lift_pressure = -(full.B * s.boundary_values);
  return s;
}

SaddleSystem attach_mean_constraint(SaddleSystem system) {
  system.mean_weights = system.Mp * Vector::Ones(system.Mp.cols());
  system.has_mean_constraint = true;
  return system;
}

Vector expand_velocity(const SaddleSystem& system, const Vector& interior) {
  Vector full = system.boundary_values;
  for (std::size_t r = 0; r < system.interior_to_full.size(); ++r) {
    full[system.interior_to_full[r]] = interior[static_cast<Eigen::Index>(r)];
  }
  return full;
}

double max_asymmetry(const SparseMatrix& m) {
  const SparseMatrix t = m.transpose();
  const SparseMatrix diff = m - t;
  return diff.nonZeros() == 0 ? 0.0 : diff.coeffs().cwiseAbs().maxCoeff();
}

}  // namespace qmini
