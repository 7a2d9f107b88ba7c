#include "dcpoly/affine.hpp"

#include "dcpoly/error.hpp"

namespace dcpoly {

AffineMinorant AffineMinorant::from_anchor(Vector anchor, double value, Vector gradient) {
  if (anchor.size() != gradient.size())
    throw InvalidInput("minorant anchor and gradient differ in length");
  double offset = value;
  for (std::size_t j = 0; j < gradient.size(); ++j) offset -= gradient[j] * anchor[j];
  return AffineMinorant{std::move(gradient), offset, std::move(anchor), value};
}

AffineMinorant AffineMinorant::from_coefficients(Vector gradient, double offset) {
  Vector origin(gradient.size(), 0.0);
  return AffineMinorant{std::move(gradient), offset, std::move(origin), offset};
}

double AffineMinorant::evaluate(std::span<const double> x) const {
  double v = anchor_value;
  for (std::size_t j = 0; j < gradient.size(); ++j) v += gradient[j] * (x[j] - anchor[j]);
  return v;
}

}  // namespace dcpoly
