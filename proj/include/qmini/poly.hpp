#pragma once

#include "qmini/rational.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qmini {

enum class Variable { X, Y };

/// Sparse bivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by (power of x, power of y). Zero coefficients are never
/// stored, so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  static constexpr int kMaxDegree = 16;
  using Monomial = std::pair<int, int>;
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT: implicit by design of the algebra
  Polynomial(int constant) : Polynomial(Rational(constant)) {}  // NOLINT

  static Polynomial x();
  static Polynomial y();
  static Polynomial monomial(int px, int py, const Rational& coefficient = 1);

  const TermMap& terms() const { return terms_; }
  Rational coefficient(int px, int py) const;
  bool is_zero() const { return terms_.empty(); }
  int degree_x() const;
  int degree_y() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  Polynomial scaled(const Rational& factor) const;

  /// Exact value at a rational point.
  Rational operator()(const Rational& px, const Rational& py) const;

  /// Substitutes a rational value for one variable; the result depends on
  /// the other variable only.
  Polynomial restrict(Variable var, const Rational& value) const;

  std::string to_string() const;

 private:
  void add_term(int px, int py, const Rational& c);
  TermMap terms_;
};

Polynomial diff(const Polynomial& p, Variable var);

/// Exact integral over the unit square (0,1)^2.
Rational integrate_unit_square(const Polynomial& p);

/// Floating-point evaluation (Horner in x, then in y).
double evaluate(const Polynomial& p, double x, double y);

/// Polynomial with coefficients converted to double and laid out densely for
/// repeated evaluation at quadrature points.
class NumericPolynomial {
 public:
  NumericPolynomial() = default;
  explicit NumericPolynomial(const Polynomial& p);

  double operator()(double x, double y) const;
  /// Gradient (d/dx, d/dy).
  std::array<double, 2> gradient(double x, double y) const;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> coeffs_;  // coeffs_[i * ny_ + j] multiplies x^i y^j
};

using VectorField = std::array<Polynomial, 2>;

}  // namespace qmini
