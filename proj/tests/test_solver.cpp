#include <doctest.h>

#include "qmini/solver.hpp"

#include <cmath>

using namespace qmini;

namespace {

SaddleSystem make_system(int n, double shear, BubbleKind kind, const VectorField& f, const VectorField& g) {
  const Mesh mesh = build_structured_mesh(n, shear);
  const DofMap dofs = build_dof_maps(mesh);
  return attach_mean_constraint(apply_dirichlet(assemble_stokes(mesh, dofs, kind, 1.0, f), mesh, dofs, g));
}

const Polynomial X = Polynomial::x();
const Polynomial Y = Polynomial::y();

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("block matrix is symmetric and sized as documented") {
  const SaddleSystem s = make_system(3, 0.2, BubbleKind::Corner, {X, Y}, {Polynomial(0), Polynomial(0)});
  const SparseMatrix K = block_matrix(s);
  CHECK(K.rows() == s.A.rows() + s.B.rows() + 1);
  CHECK(max_asymmetry(K) <= 1e-12);
  CHECK(block_rhs(s).size() == K.rows());
}

TEST_CASE("zero data gives the zero solution") {
  const SaddleSystem s = make_system(4, 0.0, BubbleKind::Linear, {Polynomial(0), Polynomial(0)},
                                     {Polynomial(0), Polynomial(0)});
  const SolveOutcome out = solve_saddle(s);
  REQUIRE(out.status == SolveStatus::Solved);
  CHECK(out.velocity.cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.pressure.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bilinear solutions are reproduced exactly") {
  // u = (x + y, x - y) is divergence free, p = x + y - 1, f = grad p.
  const VectorField u = {X + Y, X - Y};
  const VectorField f = {Polynomial(1), Polynomial(1)};
  for (BubbleKind kind : {BubbleKind::Corner, BubbleKind::Linear}) {
    for (double shear : {0.0, 0.2}) {
      const Mesh mesh = build_structured_mesh(4, shear);
      const DofMap dofs = build_dof_maps(mesh);
      const SaddleSystem s =
          attach_mean_constraint(apply_dirichlet(assemble_stokes(mesh, dofs, kind, 1.0, f), mesh, dofs, u));
      const SolveOutcome out = solve_saddle(s);
      REQUIRE(out.status == SolveStatus::Solved);
      CHECK(out.relative_residual <= kResidualTolerance);
      const Vector full = expand_velocity(s, out.velocity);
      const int ms = dofs.velocity_scalar_count();
      double mean = 0.0;
      for (int v = 0; v < mesh.vertex_count(); ++v) mean += s.mean_weights[v] * (mesh.vertex(v).x + mesh.vertex(v).y);
      for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Point p = mesh.vertex(v);
        CHECK(std::abs(full[v] - (p.x + p.y)) <= 1e-10);
        CHECK(std::abs(full[ms + v] - (p.x - p.y)) <= 1e-10);
        CHECK(std::abs(out.pressure[v] - (p.x + p.y - mean)) <= 1e-10);
      }
      for (int k = 0; k < mesh.element_count(); ++k) {
        CHECK(std::abs(full[dofs.bubble_dof(k)]) <= 1e-10);
        CHECK(std::abs(full[ms + dofs.bubble_dof(k)]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("solution is linear in the data") {
  const VectorField f1 = {X * Y, Polynomial(1) - X};
  const VectorField f2 = {Y * Y, X + Y};
  const VectorField zero = {Polynomial(0), Polynomial(0)};
  const SaddleSystem s1 = make_system(4, 0.1, BubbleKind::Corner, f1, zero);
  const SaddleSystem s2 = make_system(4, 0.1, BubbleKind::Corner, f2, zero);
  const SaddleSystem s12 = make_system(4, 0.1, BubbleKind::Corner, {f1[0] + f2[0].scaled(3), f1[1] + f2[1].scaled(3)}, zero);
  const SolveOutcome o1 = solve_saddle(s1);
  const SolveOutcome o2 = solve_saddle(s2);
  const SolveOutcome o12 = solve_saddle(s12);
  CHECK((o12.velocity - o1.velocity - 3.0 * o2.velocity).norm() <= 1e-10 * o12.velocity.norm());
  CHECK((o12.pressure - o1.pressure - 3.0 * o2.pressure).norm() <= 1e-10 * o12.pressure.norm());

  SaddleSystem scaled = s1;
  scaled.load *= 1e6;
  const SolveOutcome os = solve_saddle(scaled);
  REQUIRE(os.status == SolveStatus::Solved);
  CHECK((os.velocity - 1e6 * o1.velocity).norm() <= 1e-9 * os.velocity.norm());
}

TEST_CASE("residual check detects a perturbed solution") {
  const SaddleSystem s = make_system(4, 0.0, BubbleKind::Linear, {X, X * Y}, {Polynomial(0), Polynomial(0)});
  SolveOutcome out = solve_saddle(s);
  REQUIRE(out.status == SolveStatus::Solved);
  CHECK(verify_residual(s, out) <= kResidualTolerance);
  out.velocity[0] += 1e-3;
  CHECK(verify_residual(s, out) > kResidualTolerance);
}

TEST_CASE("standard bubble system is reported singular") {
  for (int n : {4, 8}) {
    const SaddleSystem s = make_system(n, 0.0, BubbleKind::Standard, {X, Y}, {Polynomial(0), Polynomial(0)});
    const SolveOutcome out = solve_saddle(s);
    CHECK(out.status == SolveStatus::Singular);
    CHECK(out.pivot_ratio < kSingularPivotRatio);
  }
}

TEST_CASE("generic sparse LU") {
  SparseMatrix m(3, 3);
  std::vector<Eigen::Triplet<double, int>> t = {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}, {2, 2, 2.0}};
  m.setFromTriplets(t.begin(), t.end());
  const Vector b = Vector::Ones(3);
  const LinearSolveResult r = solve_sparse_lu(m, b);
  REQUIRE(r.status == SolveStatus::Solved);
  CHECK(relative_residual(m, r.x, b) <= 1e-15);

  SparseMatrix sing(2, 2);
  std::vector<Eigen::Triplet<double, int>> ts = {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}};
  sing.setFromTriplets(ts.begin(), ts.end());
  CHECK(solve_sparse_lu(sing, Vector::Ones(2)).status == SolveStatus::Singular);
  CHECK(relative_residual(sing, Vector::Zero(2), Vector::Zero(2)) == 0.0);
}

}  // TEST_SUITE
