#pragma once

#include "qmini/mesh.hpp"
#include "qmini/poly.hpp"
#include "qmini/refelem.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace qmini {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

// Every assemble_* routine works on the full (pre-elimination) numbering of
// DofMap: velocity matrices are 2*ms x 2*ms with ms = velocity_scalar_count.

/// nu * int grad(phi_i) : grad(phi_j), identical blocks per velocity component.
SparseMatrix assemble_viscous(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, double nu);

/// Rows are pressure dofs, columns vector velocity dofs:
/// B(j, (c, i)) = int d_c(phi_i) psi_j.
SparseMatrix assemble_divergence(const Mesh& mesh, const DofMap& dofs, BubbleKind kind);

SparseMatrix assemble_pressure_mass(const Mesh& mesh, const DofMap& dofs);

/// L2 mass matrix of the vector velocity space.
SparseMatrix assemble_velocity_mass(const Mesh& mesh, const DofMap& dofs, BubbleKind kind);

/// Full H1 inner product (mass + unit-viscosity stiffness) of the velocity space.
SparseMatrix assemble_velocity_gram(const Mesh& mesh, const DofMap& dofs, BubbleKind kind);

/// int f . phi_i, using the kLoadQuadratureOrder rule.
Vector assemble_load(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, const VectorField& f);

/// M_v f_I, where f_I takes the nodal values of f at the vertices and zero
/// bubble coefficients.
Vector assemble_interpolated_load(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, const VectorField& f);

enum class LoadRule { Quadrature, Interpolated };

/// Quadrature order used for the element matrices; 0 selects
/// assembly_quadrature_order(kind). Exposed for the quadrature-independence test.
SparseMatrix assemble_viscous_with_order(const Mesh& mesh, const DofMap& dofs, BubbleKind kind,
                                         double nu, int order);

struct FullSystem {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix Mp;
  SparseMatrix Gv;
  Vector load;
};

FullSystem assemble_stokes(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, double nu,
                           const VectorField& f, LoadRule load = LoadRule::Quadrature);

/// Stokes system on interior velocity dofs.
///
/// Block equations solved downstream (p is the pressure of
/// -nu lap(u) + grad(p) = f, hence the minus signs on B):
///   A u - B^T p           = load + lift_velocity
///   B u       - w lambda  = lift_pressure
///       w^T p             = 0
struct SaddleSystem {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix Mp;
  SparseMatrix Gv;
  Vector load;
  Vector lift_velocity;
  Vector lift_pressure;
  Vector mean_weights;
  bool has_mean_constraint = false;

  /// Full-numbering velocity vector holding the Dirichlet values (zero at
  /// interior dofs).
  Vector boundary_values;
  /// Full vector index of each reduced velocity dof.
  std::vector<int> interior_to_full;
};

/// Fixes boundary vertex dofs to g at the vertices and eliminates them.
SaddleSystem apply_dirichlet(const FullSystem& full, const Mesh& mesh, const DofMap& dofs,
                             const VectorField& g);

/// Records the zero-mean pressure constraint (weights = int psi_j).
SaddleSystem attach_mean_constraint(SaddleSystem system);

/// Reassembles a full-numbering velocity vector from reduced interior values.
Vector expand_velocity(const SaddleSystem& system, const Vector& interior);

/// Largest |M(i,j) - M(j,i)|.
double max_asymmetry(const SparseMatrix& m);

}  // namespace qmini
