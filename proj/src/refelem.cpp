#include "qmini/refelem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmini {

std::string_view to_string(BubbleKind kind) {
  switch (kind) {
    case BubbleKind::Standard: return "standard";
    case BubbleKind::Corner: return "corner";
    case BubbleKind::Linear: return "linear";
    case BubbleKind::QuadSym: return "quadsym";
  }
  return "unknown";
}

std::optional<BubbleKind> parse_bubble_kind(std::string_view name) {
  for (BubbleKind kind : kAllBubbleKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::array<Polynomial, 4> q1_basis() {
  const Polynomial x = Polynomial::x();
  const Polynomial y = Polynomial::y();
  const Polynomial one = 1;
  return {(one - x) * (one - y), x * (one - y), x * y, (one - x) * y};
}

Polynomial bubble(BubbleKind kind) {
  const Polynomial x = Polynomial::x();
  const Polynomial y = Polynomial::y();
  const Polynomial one = 1;
  const Polynomial core = x * y * (one - x) * (one - y);
  switch (kind) {
    case BubbleKind::Standard: return core.scaled(16);
    case BubbleKind::Corner: return ((one - x) * (one - y) * core).scaled(64);
    case BubbleKind::Linear: return ((one + x + y) * core).scaled(8);
    case BubbleKind::QuadSym:
      return (x * x + y * y - x - y + Polynomial(Rational(33, 2))) * core;
  }
  throw std::invalid_argument("unknown bubble kind");
}

namespace {

// Gauss-Legendre nodes and weights on (-1,1) by Newton iteration on P_n.
void gauss_legendre_1d(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / derivative;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    derivative = n * (t * p1 - p0) / (t * t - 1.0);
    nodes[static_cast<std::size_t>(i)] = t;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * derivative * derivative);
  }
}

}  // namespace

QuadratureRule gauss_rule(int n) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("gauss_rule: order must be in 1..8, got " + std::to_string(n));
  }
  std::vector<double> nodes;
  std::vector<double> weights;
  if (n == 1) {
    nodes = {0.0};
    weights = {2.0};
  } else {
    gauss_legendre_1d(n, nodes, weights);
  }

  QuadratureRule rule;
  rule.points.reserve(static_cast<std::size_t>(n * n));
  rule.weights.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      rule.points.push_back({0.5 * (nodes[ui] + 1.0), 0.5 * (nodes[uj] + 1.0)});
      rule.weights.push_back(0.25 * weights[ui] * weights[uj]);
    }
  }
  return rule;
}

int assembly_quadrature_order(BubbleKind kind) {
  const Polynomial b = bubble(kind);
  const int degree = std::max(b.degree_x(), b.degree_y());
  // b*b has degree 2*degree per variable; n points integrate 2n-1.
  return std::max(4, degree + 1);
}

ReferenceTabulation tabulate(BubbleKind kind, const QuadratureRule& rule) {
  ReferenceTabulation tab;
  tab.rule = rule;
  const auto hats = q1_basis();
  std::array<NumericPolynomial, ReferenceTabulation::kVelocityFunctions> functions = {
      NumericPolynomial(hats[0]), NumericPolynomial(hats[1]), NumericPolynomial(hats[2]),
      NumericPolynomial(hats[3]), NumericPolynomial(bubble(kind))};
  const std::size_t nq = rule.size();
  for (std::size_t f = 0; f < functions.size(); ++f) {
    tab.value[f].resize(nq);
    tab.dxi[f].resize(nq);
    tab.deta[f].resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
      const auto [xi, eta] = rule.points[q];
      tab.value[f][q] = functions[f](xi, eta);
      const auto g = functions[f].gradient(xi, eta);
      tab.dxi[f][q] = g[0];
      tab.deta[f][q] = g[1];
    }
  }
  return tab;
}

}  // namespace qmini
