#include "dcpoly/box.hpp"

#include <string>

#include "dcpoly/error.hpp"

namespace dcpoly {

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidInput("box must have dimension n >= 1");
  if (lower_.size() != upper_.size())
    throw InvalidInput("box bounds differ in length: " + std::to_string(lower_.size()) + " vs " +
                       std::to_string(upper_.size()));
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i]))
      throw InvalidInput("box needs lower < upper in coordinate " + std::to_string(i));
  }
}

Vector Box::center() const {
  Vector c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lower_[i] + upper_[i]);
  return c;
}

bool Box::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
  }
  return true;
}

Vector Box::corner(std::size_t mask) const {
  Vector c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = (mask >> i) & 1U ? upper_[i] : lower_[i];
  return c;
}

}  // namespace dcpoly
