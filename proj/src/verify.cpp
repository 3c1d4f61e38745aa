#include "qmini/verify.hpp"

#include "qmini/simd/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace qmini {

std::string_view to_string(ExampleId id) { return id == ExampleId::Example1 ? "example1" : "example2"; }

ManufacturedCase manufactured_case(ExampleId id) {
  const Polynomial x = Polynomial::x();
  const Polynomial y = Polynomial::y();
  const Polynomial one = 1;
  ManufacturedCase c;
  c.id = id;
  c.nu = 1.0;
  if (id == ExampleId::Example1) {
    c.u[0] = (x * x * y * (y.scaled(2) - one) * (x - one) * (x - one) * (y - one)).scaled(-2);
    c.u[1] = (x * y * y * (x.scaled(2) - one) * (x - one) * (y - one) * (y - one)).scaled(2);
    c.p = x * (one - x) * (one - y.scaled(2));
  } else {
    c.u[0] = x + x * x - (x * y).scaled(2) + x * x * x - (x * y * y).scaled(3) + x * x * y;
    c.u[1] = -y - (x * y).scaled(2) + y * y - (x * x * y).scaled(3) + y * y * y - x * y * y;
    c.p = x * y + x + y + x * x * x * y * y - Polynomial(Rational(4, 3));
  }
  const Rational nu = 1;
  for (int k = 0; k < 2; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const Polynomial laplacian = diff(diff(c.u[uk], Variable::X), Variable::X) +
                                 diff(diff(c.u[uk], Variable::Y), Variable::Y);
    c.f[uk] = laplacian.scaled(-nu) + diff(c.p, k == 0 ? Variable::X : Variable::Y);
  }
  return c;
}

ErrorNorms error_norms(const Mesh& mesh, const DofMap& dofs, BubbleKind kind, const SaddleSystem& system,
                       const SolveOutcome& outcome, const ManufacturedCase& exact, VelocityError part) {
  if (outcome.status != SolveStatus::Solved) throw std::invalid_argument("error_norms: outcome not solved");
  const auto tab = tabulate(kind, gauss_rule(kLoadQuadratureOrder));
  const std::size_t nq = tab.rule.size();
  const int ms = dofs.velocity_scalar_count();
  const Vector velocity = expand_velocity(system, outcome.velocity);
  const std::array<NumericPolynomial, 2> ue = {NumericPolynomial(exact.u[0]), NumericPolynomial(exact.u[1])};
  const NumericPolynomial pe(exact.p);

  std::vector<ElementGeometry> geometry;
  geometry.reserve(static_cast<std::size_t>(mesh.element_count()));
  std::vector<Point> mapped(nq * static_cast<std::size_t>(mesh.element_count()));
  double area = 0.0;
  double p_integral = 0.0;
  for (int k = 0; k < mesh.element_count(); ++k) {
    geometry.push_back(element_geometry(mesh, k));
    for (std::size_t q = 0; q < nq; ++q) {
      const Point pt = geometry.back().map(tab.rule.points[q][0], tab.rule.points[q][1]);
      mapped[static_cast<std::size_t>(k) * nq + q] = pt;
      const double w = geometry.back().det * tab.rule.weights[q];
      area += w;
      p_integral += w * pe(pt.x, pt.y);
    }
  }
  const double p_shift = p_integral / area;

  std::vector<double> w(nq);
  std::vector<double> ph(nq);
  std::vector<double> pex(nq);
  std::array<std::vector<double>, 2> uh{std::vector<double>(nq), std::vector<double>(nq)};
  std::array<std::vector<double>, 2> uex{std::vector<double>(nq), std::vector<double>(nq)};
  std::array<std::vector<double>, 4> guh;  // (c, d) -> 2c + d
  std::array<std::vector<double>, 4> guex;
  for (auto& v : guh) v.resize(nq);
  for (auto& v : guex) v.resize(nq);

  double l2u = 0.0;
  double h1s = 0.0;
  double l2p = 0.0;
  for (int k = 0; k < mesh.element_count(); ++k) {
    const ElementGeometry& g = geometry[static_cast<std::size_t>(k)];
    const auto local = dofs.element_velocity_dofs(mesh, k);
    const auto& vertices = mesh.element(k);
    const Eigen::Matrix2d& it = g.inverse_transpose;
    for (std::size_t q = 0; q < nq; ++q) {
      w[q] = g.det * tab.rule.weights[q];
      const Point pt = mapped[static_cast<std::size_t>(k) * nq + q];
      double p = 0.0;
      for (int j = 0; j < 4; ++j) p += outcome.pressure[vertices[static_cast<std::size_t>(j)]] * tab.value[static_cast<std::size_t>(j)][q];
      ph[q] = p;
      pex[q] = pe(pt.x, pt.y) - p_shift;
      for (int c = 0; c < 2; ++c) {
        double value = 0.0;
        double dxi = 0.0;
        double deta = 0.0;
        const int active = part == VelocityError::Full ? 5 : 4;
        for (int f = 0; f < active; ++f) {
          const double coef = velocity[c * ms + local[static_cast<std::size_t>(f)]];
          value += coef * tab.value[static_cast<std::size_t>(f)][q];
          dxi += coef * tab.dxi[static_cast<std::size_t>(f)][q];
          deta += coef * tab.deta[static_cast<std::size_t>(f)][q];
        }
        const auto uc = static_cast<std::size_t>(c);
        uh[uc][q] = value;
        guh[2 * uc][q] = it(0, 0) * dxi + it(0, 1) * deta;
        guh[2 * uc + 1][q] = it(1, 0) * dxi + it(1, 1) * deta;
        uex[uc][q] = ue[uc](pt.x, pt.y);
        const auto grad = ue[uc].gradient(pt.x, pt.y);
        guex[2 * uc][q] = grad[0];
        guex[2 * uc + 1][q] = grad[1];
      }
    }
    for (std::size_t c = 0; c < 2; ++c) l2u += simd::weighted_sum_sq_diff(w, uh[c], uex[c]);
    for (std::size_t d = 0; d < 4; ++d) h1s += simd::weighted_sum_sq_diff(w, guh[d], guex[d]);
    l2p += simd::weighted_sum_sq_diff(w, ph, pex);
  }
  ErrorNorms e;
  e.l2_u = std::sqrt(l2u);
  e.h1_semi_u = std::sqrt(h1s);
  e.h1_u = std::sqrt(l2u + h1s);
  e.l2_p = std::sqrt(l2p);
  return e;
}

std::vector<double> eoc(std::span<const double> errors) {
  for (double e : errors) {
    if (!(e > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
  }
  std::vector<double> rates;
  for (std::size_t i = 1; i < errors.size(); ++i) rates.push_back(std::log2(errors[i - 1] / errors[i]));
  return rates;
}

std::vector<double> ErrorReport::column(double ErrorNorms::*field) const {
  std::vector<double> values;
  values.reserve(levels.size());
  for (const auto& l : levels) values.push_back(l.errors.*field);
  return values;
}

std::vector<std::optional<double>> ErrorReport::rates(double ErrorNorms::*field) const {
  const auto values = column(field);
  std::vector<std::optional<double>> out;
  if (values.empty()) return out;
  out.emplace_back(std::nullopt);
  for (double r : eoc(values)) out.emplace_back(r);
  return out;
}

LevelSolution solve_level(const ManufacturedCase& exact, BubbleKind kind, int level, double shear,
                          LoadRule load) {
  Mesh mesh = build_structured_mesh(subdivisions_for_level(level), shear);
  DofMap dofs = build_dof_maps(mesh);
  const FullSystem full = assemble_stokes(mesh, dofs, kind, exact.nu, exact.f, load);
  SaddleSystem system = attach_mean_constraint(apply_dirichlet(full, mesh, dofs, exact.u));
  SolveOutcome outcome = solve_saddle(system);
  return {std::move(mesh), std::move(dofs), std::move(system), std::move(outcome)};
}

ErrorReport run_convergence_study(ExampleId id, BubbleKind kind, int max_level, double shear,
                                  StudyProtocol protocol) {
  if (max_level < 1 || max_level > 6) throw std::invalid_argument("max_level must be in 1..6");
  const ManufacturedCase exact = manufactured_case(id);
  ErrorReport report;
  report.example = id;
  report.bubble = kind;
  report.shear = shear;
  for (int level = 1; level <= max_level; ++level) {
    const LevelSolution s = solve_level(exact, kind, level, shear, protocol.load);
    if (s.outcome.status == SolveStatus::Singular) {
      report.status = SolveStatus::Singular;
      report.singular_level = level;
      break;
    }
    report.levels.push_back({level, s.mesh.element_count(),
                             error_norms(s.mesh, s.dofs, kind, s.system, s.outcome, exact, protocol.velocity_error),
                             s.outcome.relative_residual});
  }
  return report;
}

}  // namespace qmini
