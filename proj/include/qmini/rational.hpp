#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qmini {

// Arbitrary-precision rational, always held in lowest terms with a positive
// denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) {
    return boost::multiprecision::numerator(r).str();
  }
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace qmini
