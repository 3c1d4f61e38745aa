#pragma once

#include "qmini/assembly.hpp"
#include "qmini/solver.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qmini {

enum class ExampleId { Example1, Example2 };

std::string_view to_string(ExampleId id);

/// Exact Stokes solution with its right-hand side f = -nu lap(u) + grad(p).
struct ManufacturedCase {
  ExampleId id = ExampleId::Example1;
  VectorField u;
  Polynomial p;
  VectorField f;
  double nu = 1.0;
};

ManufacturedCase manufactured_case(ExampleId id);

struct ErrorNorms {
  double h1_u = 0.0;       // full H1 norm of u - u_h
  double h1_semi_u = 0.0;  // H1 seminorm of u - u_h
  double l2_u = 0.0;
  double l2_p = 0.0;       // against p shifted to zero mean over the mesh domain
};

/// Which part of u_h enters the velocity errors. VertexPart drops the bubble
/// coefficients and measures only the Q1 component.
enum class VelocityError { VertexPart, Full };

/// Discretisation choices for the convergence study. The defaults match the
/// reference error tables; {Quadrature, Full} is the plain Galerkin variant.
struct StudyProtocol {
  LoadRule load = LoadRule::Interpolated;
  VelocityError velocity_error = VelocityError::VertexPart;
};

/// Elementwise Gauss quadrature (order kLoadQuadratureOrder) of the errors.
/// `outcome` must be Solved.
ErrorNorms error_norms(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, const SaddleSystem& system,
                       const SolveOutcome& outcome, const ManufacturedCase& exact,
                       VelocityError part = VelocityError::Full);

/// rate_l = log2(e_{l-1} / e_l); the result has one entry fewer than the input.
/// Throws std::invalid_argument on a nonpositive error.
std::vector<double> eoc(std::span<const double> errors);

struct LevelErrors {
  int level = 0;
  int elements = 0;
  ErrorNorms errors;
  double relative_residual = 0.0;
};

struct ErrorReport {
  ExampleId example = ExampleId::Example1;
  BubbleKind bubble = BubbleKind::Corner;
  double shear = 0.0;
  SolveStatus status = SolveStatus::Solved;
  /// Level at which the solver reported a singular system.
  std::optional<int> singular_level;
  std::vector<LevelErrors> levels;

  std::vector<double> column(double ErrorNorms::*field) const;
  /// Rates for one error column; empty optional on the first level.
  std::vector<std::optional<double>> rates(double ErrorNorms::*field) const;
};

struct LevelSolution {
  Mesh mesh;
  DofMap dofs;
  SaddleSystem system;
  SolveOutcome outcome;
};

/// Assembles and solves one level of a manufactured case; Dirichlet data is
/// the nodal interpolant of the exact velocity.
LevelSolution solve_level(const ManufacturedCase& exact, BubbleKind kind, int level, double shear = 0.0,
                          LoadRule load = LoadRule::Interpolated);

/// Levels 1..max_level (1 <= max_level <= 6). Stops at the first singular level.
ErrorReport run_convergence_study(ExampleId id, BubbleKind kind, int max_level, double shear = 0.0,
                                  StudyProtocol protocol = {});

}  // namespace qmini
