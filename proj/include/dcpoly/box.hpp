#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dcpoly {

using Vector = std::vector<double>;

/// Axis-aligned compact box [lower, upper] with nonempty interior.
class Box {
 public:
  /// Throws InvalidInput unless both vectors have equal length n >= 1 and
  /// lower_i < upper_i for every i.
  Box(Vector lower, Vector upper);

  std::size_t dim() const noexcept { return lower_.size(); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

  Vector center() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;

  /// Corner selected by the bits of `mask`: bit i set picks upper_i.
  Vector corner(std::size_t mask) const;
  std::size_t corner_count() const noexcept { return std::size_t{1} << dim(); }

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace dcpoly
