#include "qmini/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace qmini::simd {

namespace {

Isa initial_isa() {
  if (const char* env = std::getenv("QMINI_SIMD"); env && std::string_view(env) == "scalar") {
    return Isa::Scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa isa = avx2::available() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  active().store(isa, std::memory_order_relaxed);
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return active_isa() == Isa::Avx2 ? avx2::weighted_dot(w, a, b) : scalar::weighted_dot(w, a, b);
}

double weighted_sum_sq_diff(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return active_isa() == Isa::Avx2 ? avx2::weighted_sum_sq_diff(w, a, b)
                                   : scalar::weighted_sum_sq_diff(w, a, b);
}

void csr_spmv(const CsrView& m, std::span<const double> x, std::span<double> y) {
  if (active_isa() == Isa::Avx2) {
    avx2::csr_spmv(m, x, y);
  } else {
    scalar::csr_spmv(m, x, y);
  }
}

}  // namespace qmini::simd
