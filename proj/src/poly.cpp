#include "qmini/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qmini {

Polynomial::Polynomial(const Rational& constant) { add_term(0, 0, constant); }

Polynomial Polynomial::x() { return monomial(1, 0); }
Polynomial Polynomial::y() { return monomial(0, 1); }

Polynomial Polynomial::monomial(int px, int py, const Rational& coefficient) {
  if (px < 0 || py < 0) throw std::invalid_argument("negative monomial power");
  if (px > kMaxDegree || py > kMaxDegree) {
    throw std::overflow_error("polynomial degree exceeds bound");
  }
  Polynomial p;
  p.add_term(px, py, coefficient);
  return p;
}

void Polynomial::add_term(int px, int py, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace({px, py}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Polynomial::coefficient(int px, int py) const {
  auto it = terms_.find({px, py});
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree_x() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.first);
  return d;
}

int Polynomial::degree_y() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.second);
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m.first, m.second, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m.first, m.second, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (!a.is_zero() && !b.is_zero() &&
      (a.degree_x() + b.degree_x() > Polynomial::kMaxDegree ||
       a.degree_y() + b.degree_y() > Polynomial::kMaxDegree)) {
    throw std::overflow_error("polynomial product exceeds degree bound");
  }
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      r.add_term(ma.first + mb.first, ma.second + mb.second, ca * cb);
    }
  }
  return r;
}

Polynomial operator-(const Polynomial& a) { return a.scaled(-1); }

Polynomial Polynomial::scaled(const Rational& factor) const {
  Polynomial r;
  if (factor == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * factor);
  return r;
}

namespace {

Rational rational_pow(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Rational Polynomial::operator()(const Rational& px, const Rational& py) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    sum += c * rational_pow(px, m.first) * rational_pow(py, m.second);
  }
  return sum;
}

Polynomial Polynomial::restrict(Variable var, const Rational& value) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    if (var == Variable::X) {
      r.add_term(0, m.second, c * rational_pow(value, m.first));
    } else {
      r.add_term(m.first, 0, c * rational_pow(value, m.second));
    }
  }
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << qmini::to_string(c) << ")";
    if (m.first > 0) os << "*x^" << m.first;
    if (m.second > 0) os << "*y^" << m.second;
  }
  return os.str();
}

Polynomial diff(const Polynomial& p, Variable var) {
  Polynomial r;
  for (const auto& [m, c] : p.terms()) {
    const int power = var == Variable::X ? m.first : m.second;
    if (power == 0) continue;
    if (var == Variable::X) {
      r += Polynomial::monomial(m.first - 1, m.second, c * power);
    } else {
      r += Polynomial::monomial(m.first, m.second - 1, c * power);
    }
  }
  return r;
}

Rational integrate_unit_square(const Polynomial& p) {
  Rational sum = 0;
  for (const auto& [m, c] : p.terms()) {
    sum += c / Rational((m.first + 1) * (m.second + 1));
  }
  return sum;
}

double evaluate(const Polynomial& p, double x, double y) {
  return NumericPolynomial(p)(x, y);
}

NumericPolynomial::NumericPolynomial(const Polynomial& p)
    : nx_(p.is_zero() ? 0 : p.degree_x() + 1), ny_(p.is_zero() ? 0 : p.degree_y() + 1) {
  coeffs_.assign(static_cast<std::size_t>(nx_ * ny_), 0.0);
  for (const auto& [m, c] : p.terms()) {
    coeffs_[static_cast<std::size_t>(m.first * ny_ + m.second)] = to_double(c);
  }
}

double NumericPolynomial::operator()(double x, double y) const {
  double result = 0.0;
  for (int i = nx_ - 1; i >= 0; --i) {
    const double* row = coeffs_.data() + i * ny_;
    double inner = 0.0;
    for (int j = ny_ - 1; j >= 0; --j) inner = inner * y + row[j];
    result = result * x + inner;
  }
  return result;
}

std::array<double, 2> NumericPolynomial::gradient(double x, double y) const {
  double dx = 0.0;
  double dy = 0.0;
  for (int i = nx_ - 1; i >= 0; --i) {
    const double* row = coeffs_.data() + i * ny_;
    double value = 0.0;
    double slope = 0.0;
    for (int j = ny_ - 1; j >= 0; --j) {
      slope = slope * y + value;
      value = value * y + row[j];
    }
    // d/dx: accumulate i * x^(i-1) * value_i via Horner on the x-derivative.
    if (i > 0) dx = dx * x + i * value;
    dy = dy * x + slope;
  }
  return {dx, dy};
}

}  // namespace qmini
