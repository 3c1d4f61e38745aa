#include "qmini/simd/kernels.hpp"

namespace qmini::simd::scalar {

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * a[i] * b[i];
  return sum;
}

double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = a[i] - b[i];
    sum += w[i] * d * d;
  }
  return sum;
}

void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double sum = 0.0;
    for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) sum += m.values[k] * x[static_cast<std::size_t>(m.col_idx[k])];
    y[r] = sum;
  }
}

}  // namespace qmini::simd::scalar
