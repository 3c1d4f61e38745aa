#include "qmini/stability.hpp"

#include "qmini/assembly.hpp"
#include "qmini/poly.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <array>
#include <cmath>
#include <stdexcept>

namespace qmini {

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

namespace {

constexpr std::array<std::array<int, 2>, 4> kElementOffsets = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
// Local corner offsets in the counterclockwise order of q1_basis().
constexpr std::array<std::array<int, 2>, 4> kLocalCorners = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

int macro_vertex(int i, int j) { return j * 3 + i; }

}  // namespace

MacroMatrix build_macro_matrix(BubbleKind kind) {
  const auto hats = q1_basis();
  const Polynomial b = bubble(kind);
  const std::array<Polynomial, 2> db = {diff(b, Variable::X), diff(b, Variable::Y)};

  MacroMatrix m;
  m.entries = RationalMatrix(MacroMatrix::kRows, MacroMatrix::kCols);
  for (int e = 0; e < 4; ++e) {
    const auto [ox, oy] = kElementOffsets[static_cast<std::size_t>(e)];
    for (int local = 0; local < 4; ++local) {
      const auto [cx, cy] = kLocalCorners[static_cast<std::size_t>(local)];
      const int row = macro_vertex(ox + cx, oy + cy);
      const Polynomial& psi = hats[static_cast<std::size_t>(local)];
      // The element's own bubble.
      for (int c = 0; c < 2; ++c) {
        m.entries(row, 2 * e + c) += integrate_unit_square(db[static_cast<std::size_t>(c)] * psi);
      }
      // The interior vertex (1,1) is local corner `k` of every element.
      for (int k = 0; k < 4; ++k) {
        const auto [kx, ky] = kLocalCorners[static_cast<std::size_t>(k)];
        if (ox + kx != 1 || oy + ky != 1) continue;
        const Polynomial& phi = hats[static_cast<std::size_t>(k)];
        m.entries(row, 8) += integrate_unit_square(diff(phi, Variable::X) * psi);
        m.entries(row, 9) += integrate_unit_square(diff(phi, Variable::Y) * psi);
      }
    }
  }
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) m.row_basis.push_back("psi(" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  for (int e = 0; e < 4; ++e) {
    m.col_basis.push_back("bubble" + std::to_string(e) + ".x");
    m.col_basis.push_back("bubble" + std::to_string(e) + ".y");
  }
  m.col_basis.push_back("hat(1,1).x");
  m.col_basis.push_back("hat(1,1).y");
  return m;
}

MacroMatrix build_macro_matrix(BubbleKind kind, const RationalMatrix& jacobian) {
  if (jacobian.rows() != 2 || jacobian.cols() != 2) throw std::invalid_argument("jacobian must be 2x2");
  const Rational det = jacobian(0, 0) * jacobian(1, 1) - jacobian(0, 1) * jacobian(1, 0);
  if (det == 0) throw std::invalid_argument("jacobian is singular");
  const Rational abs_det = det < 0 ? Rational(-det) : det;
  // J^{-T} = (1/det) [ j11 -j10; -j01 j00 ]
  const std::array<std::array<Rational, 2>, 2> inv_t = {{{jacobian(1, 1) / det, -jacobian(1, 0) / det},
                                                          {-jacobian(0, 1) / det, jacobian(0, 0) / det}}};
  MacroMatrix ref = build_macro_matrix(kind);
  MacroMatrix out = ref;
  for (int r = 0; r < MacroMatrix::kRows; ++r) {
    for (int f = 0; f < MacroMatrix::kCols / 2; ++f) {
      for (int c = 0; c < 2; ++c) {
        out.entries(r, 2 * f + c) =
            abs_det * (inv_t[static_cast<std::size_t>(c)][0] * ref.entries(r, 2 * f) +
                       inv_t[static_cast<std::size_t>(c)][1] * ref.entries(r, 2 * f + 1));
      }
    }
  }
  return out;
}

int rational_rank(const RationalMatrix& m) {
  const int rows = m.rows();
  const int cols = m.cols();
  // Clear denominators row by row.
  std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(rows), std::vector<BigInt>(static_cast<std::size_t>(cols)));
  for (int r = 0; r < rows; ++r) {
    BigInt scale = 1;
    for (int c = 0; c < cols; ++c) scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(m(r, c)));
    for (int c = 0; c < cols; ++c) {
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          boost::multiprecision::numerator(m(r, c)) * (scale / boost::multiprecision::denominator(m(r, c)));
    }
  }

  int rank = 0;
  BigInt previous = 1;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(rank)]);
    const auto& prow = a[static_cast<std::size_t>(rank)];
    const BigInt& p = prow[static_cast<std::size_t>(col)];
    for (int r = rank + 1; r < rows; ++r) {
      auto& row = a[static_cast<std::size_t>(r)];
      const BigInt factor = row[static_cast<std::size_t>(col)];
      for (int c = col + 1; c < cols; ++c) {
        const BigInt num = p * row[static_cast<std::size_t>(c)] - factor * prow[static_cast<std::size_t>(c)];
        if (num % previous != 0) throw std::logic_error("Bareiss division is not exact");
        row[static_cast<std::size_t>(c)] = num / previous;
      }
      row[static_cast<std::size_t>(col)] = 0;
    }
    previous = p;
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> null_space(const RationalMatrix& m) {
  RationalMatrix a = m;
  const int rows = a.rows();
  const int cols = a.cols();
  std::vector<int> pivot_cols;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (a(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    for (int k = 0; k < cols; ++k) std::swap(a(pivot, k), a(r, k));
    const Rational inv = 1 / a(r, c);
    for (int k = 0; k < cols; ++k) a(r, k) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational factor = a(i, c);
      for (int k = 0; k < cols; ++k) a(i, k) -= factor * a(r, k);
    }
    pivot_cols.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      v[static_cast<std::size_t>(pivot_cols[i])] = -a(static_cast<int>(i), free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

StabilityReport check_m1(BubbleKind kind) {
  const MacroMatrix d = build_macro_matrix(kind);
  StabilityReport report;
  report.bubble = kind;
  report.rank = rational_rank(d.entries);
  report.dim_bi = MacroMatrix::kRows - report.rank;
  report.m1_satisfied = report.dim_bi == 1;

  bool orthogonal = true;
  for (int c = 0; c < MacroMatrix::kCols; ++c) {
    Rational sum = 0;
    for (int r = 0; r < MacroMatrix::kRows; ++r) sum += d.entries(r, c);
    orthogonal = orthogonal && sum == 0;
  }
  report.constant_in_left_null_space = orthogonal;
  return report;
}

InfSupEstimate estimate_infsup(const Mesh& mesh, const DofMap& dofs, BubbleKind kind) {
  if (mesh.subdivisions() > kMaxInfSupSubdivisions) {
    throw std::invalid_argument("estimate_infsup: mesh too large for dense eigenanalysis (n > 32)");
  }
  FullSystem full;
  full.A = assemble_velocity_gram(mesh, dofs, kind);
  full.Gv = full.A;
  full.B = assemble_divergence(mesh, dofs, kind);
  full.Mp = assemble_pressure_mass(mesh, dofs);
  full.load = Vector::Zero(dofs.velocity_vector_count());
  const SaddleSystem sys = attach_mean_constraint(apply_dirichlet(full, mesh, dofs, {Polynomial(), Polynomial()}));

  const Eigen::SparseMatrix<double> gram = sys.Gv;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(gram);
  if (chol.info() != Eigen::Success) throw std::runtime_error("estimate_infsup: Gram matrix is not SPD");
  const Eigen::MatrixXd bt = Eigen::MatrixXd(sys.B.transpose());
  const Eigen::MatrixXd x = chol.solve(bt);
  Eigen::MatrixXd schur = sys.B * x;
  schur = 0.5 * (schur + schur.transpose()).eval();
  const Eigen::MatrixXd mass = Eigen::MatrixXd(sys.Mp);

  // Orthonormal basis of the complement of the mean weights.
  const auto np = schur.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(sys.mean_weights));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(np, np);
  const Eigen::MatrixXd z = q.rightCols(np - 1);
  const Eigen::MatrixXd sz = z.transpose() * schur * z;
  const Eigen::MatrixXd mz = z.transpose() * mass * z;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (sz + sz.transpose()),
                                                                0.5 * (mz + mz.transpose()),
                                                                Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("estimate_infsup: eigensolver failed");

  InfSupEstimate est;
  est.elements = mesh.element_count();
  for (int level = 0; level <= 4; ++level) {
    if (subdivisions_for_level(level) == mesh.subdivisions()) est.level = level;
  }
  est.smallest_eigenvalue = eig.eigenvalues().minCoeff();
  est.beta = std::sqrt(std::max(est.smallest_eigenvalue, 0.0));
  return est;
}

}  // namespace qmini
