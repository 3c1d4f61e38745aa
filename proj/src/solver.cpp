#include "qmini/solver.hpp"

#include "qmini/simd/kernels.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmini {

namespace {

using CscMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// SparseLU exposing the diagonal of U, which lives in the supernodal L store.
class PivotedSparseLU : public Eigen::SparseLU<CscMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  double pivot_ratio() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      double d = 0.0;
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          d = std::abs(it.value());
          break;
        }
      }
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return hi > 0.0 ? lo / hi : 0.0;
  }
};

// D with D_i = 1 / sqrt(max_j |K_ij|), so that D K D has unit row maxima up to
// a factor and pivot sizes become comparable across the velocity and pressure
// blocks.
Vector equilibration(const SparseMatrix& k) {
  Vector d(k.rows());
  for (int r = 0; r < k.outerSize(); ++r) {
    double m = 0.0;
    for (SparseMatrix::InnerIterator it(k, r); it; ++it) m = std::max(m, std::abs(it.value()));
    d[r] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
  }
  return d;
}

}  // namespace

SparseMatrix block_matrix(const SaddleSystem& s) {
  const auto nu = static_cast<int>(s.A.rows());
  const auto np = static_cast<int>(s.B.rows());
  const int n = nu + np + (s.has_mean_constraint ? 1 : 0);
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(static_cast<std::size_t>(s.A.nonZeros() + 2 * s.B.nonZeros() + 2 * np));
  for (int r = 0; r < s.A.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(s.A, r); it; ++it) t.emplace_back(r, static_cast<int>(it.col()), it.value());
  }
  for (int r = 0; r < s.B.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(s.B, r); it; ++it) {
      t.emplace_back(nu + r, static_cast<int>(it.col()), -it.value());
      t.emplace_back(static_cast<int>(it.col()), nu + r, -it.value());
    }
  }
  if (s.has_mean_constraint) {
    for (int j = 0; j < np; ++j) {
      t.emplace_back(nu + j, n - 1, s.mean_weights[j]);
      t.emplace_back(n - 1, nu + j, s.mean_weights[j]);
    }
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();
  return k;
}

Vector block_rhs(const SaddleSystem& s) {
  const auto nu = s.A.rows();
  const auto np = s.B.rows();
  Vector b = Vector::Zero(nu + np + (s.has_mean_constraint ? 1 : 0));
  b.head(nu) = s.load + s.lift_velocity;
  b.segment(nu, np) = -s.lift_pressure;
  return b;
}

double relative_residual(const SparseMatrix& matrix, const Vector& x, const Vector& rhs) {
  Vector kx(matrix.rows());
  simd::csr_spmv({static_cast<std::size_t>(matrix.rows()), matrix.outerIndexPtr(),
                  matrix.innerIndexPtr(), matrix.valuePtr()},
                 {x.data(), static_cast<std::size_t>(x.size())},
                 {kx.data(), static_cast<std::size_t>(kx.size())});
  const double r = (kx - rhs).norm();
  const double b = rhs.norm();
  if (b == 0.0) return r;
  return r / b;
}

namespace {

// Factorization of D K D plus the refinement loop against K itself.
class EquilibratedLU {
 public:
  explicit EquilibratedLU(const SparseMatrix& matrix) : scale_(equilibration(matrix)) {
    const CscMatrix scaled = scale_.asDiagonal() * matrix * scale_.asDiagonal();
    lu_.analyzePattern(scaled);
    lu_.factorize(scaled);
    if (lu_.info() == Eigen::Success) pivot_ratio_ = lu_.pivot_ratio();
  }

  bool singular() const { return !(pivot_ratio_ >= kSingularPivotRatio); }
  double pivot_ratio() const { return pivot_ratio_; }

  Vector solve(const Vector& b) const {
    return scale_.asDiagonal() * lu_.solve(Vector(scale_.asDiagonal() * b));
  }

 private:
  Vector scale_;
  PivotedSparseLU lu_;
  double pivot_ratio_ = 0.0;
};

// Accepts x when its residual meets the contract, refining a few times first.
template <typename Solve>
SolveStatus refine(const SparseMatrix& matrix, const Vector& rhs, Vector& x, Solve&& solve) {
  for (int step = 0; step < 3 && relative_residual(matrix, x, rhs) > kResidualTolerance; ++step) {
    x += solve(Vector(rhs - matrix * x));
  }
  const double res = relative_residual(matrix, x, rhs);
  if (res > 1e-6) return SolveStatus::Singular;
  if (res > kResidualTolerance) {
    throw std::runtime_error("sparse LU did not reach the residual tolerance (" + std::to_string(res) + ")");
  }
  return SolveStatus::Solved;
}

}  // namespace

LinearSolveResult solve_sparse_lu(const SparseMatrix& matrix, const Vector& rhs) {
  const EquilibratedLU lu(matrix);
  LinearSolveResult result;
  result.pivot_ratio = lu.pivot_ratio();
  if (lu.singular()) return result;
  result.x = lu.solve(rhs);
  result.status = refine(matrix, rhs, result.x, [&](const Vector& r) { return lu.solve(r); });
  return result;
}

SolveOutcome solve_saddle(const SaddleSystem& system) {
  if (!system.has_mean_constraint) throw std::logic_error("solve_saddle: mean constraint not attached");
  const auto nu = system.A.rows();
  const auto np = system.B.rows();
  const auto n = nu + np;

  // The dense constraint row ruins the sparse fill, so factor the core
  // K1 = K0 + e e^T instead (e = first pressure dof; K0 alone is singular
  // along the constant pressure) and recover the bordered solution
  //   K0 x + c lambda = b,  c^T x = 0
  // from x = y_b - lambda y_c + mu y_e with mu = e^T x.
  SaddleSystem core_system = system;
  core_system.has_mean_constraint = false;
  SparseMatrix core = block_matrix(core_system);
  core.coeffRef(nu, nu) += 1.0;
  const EquilibratedLU lu(core);

  SolveOutcome out;
  out.pivot_ratio = lu.pivot_ratio();
  if (lu.singular()) return out;

  Vector c = Vector::Zero(n);
  c.segment(nu, np) = system.mean_weights;
  Vector e = Vector::Zero(n);
  e[nu] = 1.0;

  const auto bordered_solve = [&](const Vector& rhs) -> Vector {
    const Vector b = rhs.head(n);
    const double g = rhs[n];  // constraint right-hand side
    const Vector yb = lu.solve(b);
    const Vector yc = lu.solve(c);
    const Vector ye = lu.solve(e);
    // [ -c.yc   c.ye     ] [lambda]   [ g - c.yb ]
    // [ -e.yc   e.ye - 1 ] [  mu  ] = [   -e.yb  ]
    Eigen::Matrix2d m;
    m << -c.dot(yc), c.dot(ye), -e.dot(yc), e.dot(ye) - 1.0;
    const Eigen::Vector2d s = m.fullPivLu().solve(Eigen::Vector2d(g - c.dot(yb), -e.dot(yb)));
    Vector x(n + 1);
    x.head(n) = yb - s[0] * yc + s[1] * ye;
    x[n] = s[0];
    return x;
  };

  const SparseMatrix k = block_matrix(system);
  const Vector rhs = block_rhs(system);
  Vector x = bordered_solve(rhs);
  out.status = refine(k, rhs, x, bordered_solve);
  if (out.status == SolveStatus::Singular) return out;

  out.velocity = x.head(nu);
  out.pressure = x.segment(nu, np);
  out.multiplier = x[n];
  const double area = system.mean_weights.sum();
  out.pressure.array() -= system.mean_weights.dot(out.pressure) / area;
  out.relative_residual = verify_residual(system, out);
  return out;
}

double verify_residual(const SaddleSystem& system, const SolveOutcome& outcome) {
  const auto nu = system.A.rows();
  const auto np = system.B.rows();
  Vector x(nu + np + (system.has_mean_constraint ? 1 : 0));
  x.head(nu) = outcome.velocity;
  x.segment(nu, np) = outcome.pressure;
  if (system.has_mean_constraint) x[nu + np] = outcome.multiplier;
  return relative_residual(block_matrix(system), x, block_rhs(system));
}

}  // namespace qmini
