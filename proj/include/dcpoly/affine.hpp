#pragma once

#include <span>

#include "dcpoly/box.hpp"

namespace dcpoly {

/// Affine function s(x) = offset + gradient^T x. As a constraint it is the
/// epigraph halfspace {(x, t) : t - gradient^T x >= offset}, whose normal has
/// last coordinate +1, so the upward ray is never cut.
struct AffineMinorant {
  Vector gradient;
  double offset = 0.0;
  Vector anchor;              // generating point
  double anchor_value = 0.0;  // s(anchor), kept so evaluate(anchor) is exact

  /// s(x) = value + gradient^T (x - anchor).
  static AffineMinorant from_anchor(Vector anchor, double value, Vector gradient);
  /// s(x) = offset + gradient^T x, anchored at the origin.
  static AffineMinorant from_coefficients(Vector gradient, double offset);

  std::size_t dim() const noexcept { return gradient.size(); }

  /// Evaluated in anchored form, value + gradient^T (x - anchor).
  double evaluate(std::span<const double> x) const;
};

}  // namespace dcpoly
