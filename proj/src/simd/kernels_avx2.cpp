#include "qmini/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define QMINI_HAVE_AVX2 1
#else
#define QMINI_HAVE_AVX2 0
#endif

namespace qmini::simd::avx2 {

#if QMINI_HAVE_AVX2

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = w.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&a[i]));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(&w[i + 4]), _mm256_loadu_pd(&a[i + 4]));
    acc0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(&b[i]), acc0);
    acc1 = _mm256_fmadd_pd(p1, _mm256_loadu_pd(&b[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&a[i]));
    acc0 = _mm256_fmadd_pd(p, _mm256_loadu_pd(&b[i]), acc0);
  }
  double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += w[i] * a[i] * b[i];
  return sum;
}

double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = w.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(&w[i]), d), d, acc);
  }
  double sum = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += w[i] * d * d;
  }
  return sum;
}

void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y) {
  const double* xp = x.data();
  for (std::size_t r = 0; r < m.rows; ++r) {
    int k = m.row_ptr[r];
    const int end = m.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(m.col_idx + k));
      const __m256d xv = _mm256_i32gather_pd(xp, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(m.values + k), xv, acc);
    }
    double sum = horizontal_sum(acc);
    for (; k < end; ++k) sum += m.values[k] * xp[m.col_idx[k]];
    y[r] = sum;
  }
}

#else

bool available() { return false; }

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return scalar::weighted_dot(w, a, b);
}

double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return scalar::weighted_sum_sq_diff(w, a, b);
}

void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y) {
  scalar::csr_spmv(m, x, y);
}

#endif

}  // namespace qmini::simd::avx2
