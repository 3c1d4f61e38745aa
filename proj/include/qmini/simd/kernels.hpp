#pragma once

// Data-parallel inner loops used by assembly, error integration and residual
// checks. Each kernel has a scalar reference implementation and an AVX2/FMA
// variant; the dispatching entry points pick one at runtime.

#include <cstddef>
#include <span>
#include <string_view>

namespace qmini::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set supported by this CPU and build.
Isa detected_isa();

/// Instruction set the dispatching kernels currently use. Defaults to
/// detected_isa(); QMINI_SIMD=scalar in the environment forces the scalar path.
Isa active_isa();

/// Overrides the dispatch choice (falls back to Scalar if unsupported).
void set_active_isa(Isa isa);

/// Compressed-row view of a sparse matrix.
struct CsrView {
  std::size_t rows = 0;
  const int* row_ptr = nullptr;
  const int* col_idx = nullptr;
  const double* values = nullptr;
};

namespace scalar {
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b);
void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y);
}  // namespace scalar

namespace avx2 {
bool available();
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b);
void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y);
}  // namespace avx2

/// sum_i w[i] * a[i] * b[i]
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);

/// sum_i w[i] * (a[i] - b[i])^2
double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b);

/// y = M x
void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y);

}  // namespace qmini::simd
