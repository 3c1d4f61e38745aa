#pragma once

#include "qmini/assembly.hpp"

namespace qmini {

enum class SolveStatus { Solved, Singular };

struct SolveOutcome {
  Vector velocity;   // interior (reduced) velocity dofs
  Vector pressure;   // zero mean with respect to mean_weights
  double multiplier = 0.0;
  double relative_residual = 0.0;
  SolveStatus status = SolveStatus::Singular;
  /// min |U_ii| / max |U_ii| of the LU factors of the equilibrated system.
  double pivot_ratio = 0.0;
};

/// Relative pivot size below which a factorization is declared singular.
inline constexpr double kSingularPivotRatio = 1e-12;
/// Residual a Solved outcome must meet.
inline constexpr double kResidualTolerance = 1e-10;

/// Symmetric block matrix [A -B^T 0; -B 0 w; 0 w^T 0] (the last row/column only
/// when the mean constraint is attached).
SparseMatrix block_matrix(const SaddleSystem& system);
Vector block_rhs(const SaddleSystem& system);

struct LinearSolveResult {
  Vector x;
  SolveStatus status = SolveStatus::Singular;
  double pivot_ratio = 0.0;
};

/// Sparse LU of the symmetrically equilibrated matrix with pivot-ratio
/// singularity detection.
LinearSolveResult solve_sparse_lu(const SparseMatrix& matrix, const Vector& rhs);

/// ||K x - b|| / ||b||; 0 when b = 0 and x = 0.
double relative_residual(const SparseMatrix& matrix, const Vector& x, const Vector& rhs);

SolveOutcome solve_saddle(const SaddleSystem& system);

/// Relative residual of the outcome against the full block system.
double verify_residual(const SaddleSystem& system, const SolveOutcome& outcome);

}  // namespace qmini
