#pragma once

#include "qmini/poly.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace qmini {

/// Element bubble variants on the reference square (0,1)^2.
///
///   Standard  16 xy(1-x)(1-y)
///   Corner    64 (1-x)^2 (1-y)^2 xy        (standard bubble times the lower-left hat)
///   Linear    8 (1+x+y) xy(1-x)(1-y)
///   QuadSym   xy(x^2+y^2-x-y+33/2)(1-x)(1-y)
///
/// All four vanish on the element boundary and equal 1 at the centroid.
enum class BubbleKind { Standard, Corner, Linear, QuadSym };

inline constexpr std::array<BubbleKind, 4> kAllBubbleKinds = {
    BubbleKind::Standard, BubbleKind::Corner, BubbleKind::Linear, BubbleKind::QuadSym};

std::string_view to_string(BubbleKind kind);
std::optional<BubbleKind> parse_bubble_kind(std::string_view name);

/// Bilinear hats ordered counterclockwise from the lower-left vertex:
/// (0,0), (1,0), (1,1), (0,1).
std::array<Polynomial, 4> q1_basis();

Polynomial bubble(BubbleKind kind);

struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// n x n tensor Gauss-Legendre rule on (0,1)^2, exact for degree <= 2n-1 in
/// each variable. Valid for 1 <= n <= 8.
QuadratureRule gauss_rule(int n);

/// Smallest tensor rule that integrates bubble stiffness and mass products
/// exactly on affine elements (never below 4).
int assembly_quadrature_order(BubbleKind kind);

inline constexpr int kLoadQuadratureOrder = 6;

/// Values and reference gradients of the element's velocity functions (four
/// hats then the bubble) at the points of a quadrature rule. Pressure uses the
/// first four rows.
struct ReferenceTabulation {
  static constexpr int kVelocityFunctions = 5;
  static constexpr int kPressureFunctions = 4;

  QuadratureRule rule;
  // [function][point]
  std::array<std::vector<double>, kVelocityFunctions> value;
  std::array<std::vector<double>, kVelocityFunctions> dxi;
  std::array<std::vector<double>, kVelocityFunctions> deta;
};

ReferenceTabulation tabulate(BubbleKind kind, const QuadratureRule& rule);

}  // namespace qmini
