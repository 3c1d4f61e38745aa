#pragma once

#include "qmini/mesh.hpp"
#include "qmini/rational.hpp"
#include "qmini/refelem.hpp"

#include <string>
#include <vector>

namespace qmini {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Rational& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  RationalMatrix transpose() const;
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact divergence coupling of the four-element vertex patch.
///
/// The patch is (0,2)^2 tiled by four unit squares numbered lexicographically.
/// Rows: the nine pressure hats on the 3x3 vertex grid, lexicographic.
/// Columns: (d/dx, d/dy) of the bubbles of elements 0..3, then of the
/// interior vertex hat. Entry (j, 2f+c) = int d_c(phi_f) psi_j.
struct MacroMatrix {
  static constexpr int kRows = 9;
  static constexpr int kCols = 10;

  RationalMatrix entries;
  std::vector<std::string> row_basis;
  std::vector<std::string> col_basis;
};

MacroMatrix build_macro_matrix(BubbleKind kind);

/// Same patch mapped by x = jacobian * xi: every (d/dx, d/dy) column pair is
/// multiplied by |det J| J^{-T}. `jacobian` must be a 2x2 invertible matrix.
MacroMatrix build_macro_matrix(BubbleKind kind, const RationalMatrix& jacobian);

/// Rank by fraction-free (Bareiss) elimination.
int rational_rank(const RationalMatrix& m);

/// Basis of {x : m x = 0} from the reduced row echelon form (one column per
/// free variable, free entry set to 1).
std::vector<std::vector<Rational>> null_space(const RationalMatrix& m);

struct InfSupEstimate {
  int level = 0;
  int elements = 0;
  double beta = 0.0;
  /// Smallest eigenvalue of B G^{-1} B^T q = lambda Mp q on mean-zero pressures.
  double smallest_eigenvalue = 0.0;
};

struct StabilityReport {
  BubbleKind bubble = BubbleKind::Standard;
  int rank = 0;
  int dim_bi = 0;
  bool m1_satisfied = false;
  bool constant_in_left_null_space = false;
  std::vector<InfSupEstimate> infsup_by_level;
};

/// Rank, dim B_i = 9 - rank and the verdict "B_i is one-dimensional".
StabilityReport check_m1(BubbleKind kind);

inline constexpr int kMaxInfSupSubdivisions = 32;

/// Discrete inf-sup constant by dense generalized eigenanalysis; the constant
/// pressure mode is deflated. Requires mesh.subdivisions() <= 32.
InfSupEstimate estimate_infsup(const Mesh& mesh, const DofMap& dofs, BubbleKind kind);

}  // namespace qmini
