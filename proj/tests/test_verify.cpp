#include <doctest.h>

#include "qmini/verify.hpp"

#include <cmath>
#include <stdexcept>

using namespace qmini;

TEST_SUITE("verify") {

TEST_CASE("manufactured velocities are divergence free") {
  for (ExampleId id : {ExampleId::Example1, ExampleId::Example2}) {
    const ManufacturedCase c = manufactured_case(id);
    CHECK((diff(c.u[0], Variable::X) + diff(c.u[1], Variable::Y)).is_zero());
  }
}

TEST_CASE("example 1 velocity vanishes on the boundary") {
  const ManufacturedCase c = manufactured_case(ExampleId::Example1);
  for (const Polynomial& uk : c.u) {
    CHECK(uk.restrict(Variable::X, 0).is_zero());
    CHECK(uk.restrict(Variable::X, 1).is_zero());
    CHECK(uk.restrict(Variable::Y, 0).is_zero());
    CHECK(uk.restrict(Variable::Y, 1).is_zero());
  }
}

TEST_CASE("right-hand sides") {
  // Example 2 by hand: lap u = (2 + 2y, 2 - 2x), grad p = (y + 1 + 3x^2y^2, x + 1 + 2x^3y).
  const ManufacturedCase c = manufactured_case(ExampleId::Example2);
  CHECK(c.f[0](0, 0) == -1);
  CHECK(c.f[1](0, 0) == -1);
  CHECK(c.f[0](1, 1) == -(2 + 2) + (1 + 1 + 3));
  CHECK(c.f[1](1, 1) == -(2 - 2) + (1 + 1 + 2));
  // Exact pressures of both examples have zero mean on the unit square.
  CHECK(integrate_unit_square(c.p) == 0);
  CHECK(integrate_unit_square(manufactured_case(ExampleId::Example1).p) == 0);
}

TEST_CASE("eoc") {
  const std::vector<double> e = {1.0, 0.5, 0.125};
  const auto r = eoc(e);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.0));
  const std::vector<double> bad = {1.0, 0.0};
  CHECK_THROWS_AS(eoc(bad), std::invalid_argument);
  CHECK(eoc(std::vector<double>{}).empty());
}

TEST_CASE("error norms of an exactly reproduced solution vanish") {
  ManufacturedCase c;
  c.u = {Polynomial::x() + Polynomial::y(), Polynomial::x() - Polynomial::y()};
  c.p = Polynomial::x() + Polynomial::y() - Polynomial(1);
  c.f = {Polynomial(1), Polynomial(1)};
  for (double shear : {0.0, 0.2}) {
    for (LoadRule load : {LoadRule::Quadrature, LoadRule::Interpolated}) {
      const LevelSolution s = solve_level(c, BubbleKind::Corner, 1, shear, load);
      REQUIRE(s.outcome.status == SolveStatus::Solved);
      for (VelocityError part : {VelocityError::Full, VelocityError::VertexPart}) {
        const ErrorNorms e = error_norms(s.mesh, s.dofs, BubbleKind::Corner, s.system, s.outcome, c, part);
        CHECK(e.h1_u <= 1e-10);
        CHECK(e.l2_u <= 1e-10);
        CHECK(e.l2_p <= 1e-10);
      }
    }
  }
}

TEST_CASE("error norm components are consistent") {
  const ManufacturedCase c = manufactured_case(ExampleId::Example1);
  const LevelSolution s = solve_level(c, BubbleKind::Linear, 2);
  const ErrorNorms e = error_norms(s.mesh, s.dofs, BubbleKind::Linear, s.system, s.outcome, c);
  CHECK(std::abs(e.h1_u * e.h1_u - e.h1_semi_u * e.h1_semi_u - e.l2_u * e.l2_u) <= 1e-12 * e.h1_u * e.h1_u);
  CHECK(e.l2_u < e.h1_u);
  SolveOutcome unsolved = s.outcome;
  unsolved.status = SolveStatus::Singular;
  CHECK_THROWS_AS(error_norms(s.mesh, s.dofs, BubbleKind::Linear, s.system, unsolved, c), std::invalid_argument);
}

TEST_CASE("convergence study bookkeeping") {
  const ErrorReport r = run_convergence_study(ExampleId::Example1, BubbleKind::Corner, 3);
  CHECK(r.status == SolveStatus::Solved);
  REQUIRE(r.levels.size() == 3);
  CHECK(r.levels[2].elements == 256);
  CHECK(r.levels[2].relative_residual <= kResidualTolerance);
  const auto rates = r.rates(&ErrorNorms::l2_u);
  CHECK(!rates[0].has_value());
  CHECK(rates[2].value() > 1.8);
  CHECK_THROWS_AS(run_convergence_study(ExampleId::Example1, BubbleKind::Corner, 7), std::invalid_argument);

  const ErrorReport singular = run_convergence_study(ExampleId::Example1, BubbleKind::Standard, 2);
  CHECK(singular.status == SolveStatus::Singular);
  CHECK(singular.singular_level == 1);
  CHECK(singular.levels.empty());
}

TEST_CASE("reference level-1 row for example 1 with the corner bubble") {
  const ErrorReport r = run_convergence_study(ExampleId::Example1, BubbleKind::Corner, 1);
  REQUIRE(r.levels.size() == 1);
  const ErrorNorms& e = r.levels[0].errors;
  CHECK(e.h1_u == doctest::Approx(3.23129e-02).epsilon(0.01));
  CHECK(e.l2_u == doctest::Approx(3.03116e-03).epsilon(0.01));
  CHECK(e.l2_p == doctest::Approx(1.76150e-02).epsilon(0.01));
}

}  // TEST_SUITE
