#include <doctest.h>

#include "qmini/assembly.hpp"
#include "qmini/simd/kernels.hpp"

#include <cmath>
#include <random>

using namespace qmini;
using namespace qmini::simd;

namespace {

std::vector<double> random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Long-double accumulation as a reference independent of both kernels.
long double reference_dot(const std::vector<double>& w, const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) s += static_cast<long double>(w[i]) * a[i] * b[i];
  return s;
}

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { set_active_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("reduction kernels match a long-double reference for all lengths") {
  std::mt19937 rng(42);
  for (std::size_t n = 0; n <= 70; ++n) {
    const auto w = random_vector(rng, n);
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    const long double ref = reference_dot(w, a, b);
    long double ref_sq = 0.0L;
    for (std::size_t i = 0; i < n; ++i) ref_sq += static_cast<long double>(w[i]) * (a[i] - b[i]) * (a[i] - b[i]);
    CAPTURE(n);
    CHECK(std::abs(scalar::weighted_dot(w, a, b) - static_cast<double>(ref)) <= 1e-14);
    CHECK(std::abs(scalar::weighted_sum_sq_diff(w, a, b) - static_cast<double>(ref_sq)) <= 1e-14);
    if (avx2::available()) {
      CHECK(std::abs(avx2::weighted_dot(w, a, b) - static_cast<double>(ref)) <= 1e-14);
      CHECK(std::abs(avx2::weighted_sum_sq_diff(w, a, b) - static_cast<double>(ref_sq)) <= 1e-14);
    }
  }
}

TEST_CASE("sparse matrix-vector product: scalar and AVX2 agree") {
  const Mesh mesh = build_structured_mesh(6, 0.2);
  const DofMap dofs = build_dof_maps(mesh);
  for (BubbleKind kind : kAllBubbleKinds) {
    const SparseMatrix a = assemble_viscous(mesh, dofs, kind, 1.0);
    const SparseMatrix b = assemble_divergence(mesh, dofs, kind);
    for (const SparseMatrix* m : {&a, &b}) {
      std::mt19937 rng(1);
      const auto x = random_vector(rng, static_cast<std::size_t>(m->cols()));
      const CsrView view{static_cast<std::size_t>(m->rows()), m->outerIndexPtr(), m->innerIndexPtr(), m->valuePtr()};
      std::vector<double> ys(static_cast<std::size_t>(m->rows()));
      scalar::csr_spmv(view, x, ys);
      const Vector ref = *m * Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < ys.size(); ++i) CHECK(std::abs(ys[i] - ref[static_cast<Eigen::Index>(i)]) <= 1e-13);
      if (avx2::available()) {
        std::vector<double> yv(ys.size());
        avx2::csr_spmv(view, x, yv);
        for (std::size_t i = 0; i < ys.size(); ++i) CHECK(std::abs(yv[i] - ys[i]) <= 1e-13);
      }
    }
  }
}

TEST_CASE("dispatch follows the selected instruction set") {
  IsaGuard guard;
  set_active_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  set_active_isa(Isa::Avx2);
  CHECK(active_isa() == detected_isa());
  CHECK(to_string(Isa::Scalar) == "scalar");
}

TEST_CASE("assembled matrices do not depend on the kernel variant") {
  IsaGuard guard;
  const Mesh mesh = build_structured_mesh(5, 0.1);
  const DofMap dofs = build_dof_maps(mesh);
  set_active_isa(Isa::Scalar);
  const SparseMatrix a_s = assemble_viscous(mesh, dofs, BubbleKind::Corner, 1.0);
  const Vector l_s = assemble_load(mesh, dofs, BubbleKind::Corner, {Polynomial::x() * Polynomial::y(), Polynomial(1)});
  set_active_isa(Isa::Avx2);
  const SparseMatrix a_v = assemble_viscous(mesh, dofs, BubbleKind::Corner, 1.0);
  const Vector l_v = assemble_load(mesh, dofs, BubbleKind::Corner, {Polynomial::x() * Polynomial::y(), Polynomial(1)});
  CHECK((SparseMatrix(a_s - a_v)).norm() <= 1e-13);
  CHECK((l_s - l_v).norm() <= 1e-14);
}

}  // TEST_SUITE
