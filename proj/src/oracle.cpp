#include "dcpoly/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dcpoly/epigraph.hpp"
#include "dcpoly/error.hpp"

namespace dcpoly {
namespace {

void check_dim(const ConvexOracle& f, std::span<const double> x) {
  if (x.size() != f.dim)
    throw InvalidInput("oracle of dimension " + std::to_string(f.dim) + " called with a point of length " +
                       std::to_string(x.size()));
}

}  // namespace

double ConvexOracle::value(std::span<const double> x) const {
  check_dim(*this, x);
  return eval(x);
}

Vector ConvexOracle::subgradient(std::span<const double> x) const {
  check_dim(*this, x);
  Vector c = subgrad(x);
  if (c.size() != dim) throw InternalError("oracle returned a subgradient of the wrong length");
  return c;
}

AffineMinorant supporting_cut(const ConvexOracle& g, std::span<const double> x_bar) {
  const double value = g.value(x_bar);
  Vector c = g.subgradient(x_bar);
  return AffineMinorant::from_anchor(Vector(x_bar.begin(), x_bar.end()), value, std::move(c));
}

SubgradientCheck validate_subgradient(const ConvexOracle& oracle, const Box& box,
                                      std::span<const double> x, double step, std::uint64_t seed,
                                      std::size_t samples) {
  if (!(step > 0)) throw InvalidInput("finite-difference step must be positive");
  const std::size_t n = oracle.dim;
  const double fx = oracle.value(x);
  const Vector c = oracle.subgradient(x);

  SubgradientCheck report;
  report.is_smooth_point = true;
  Vector probe(x.begin(), x.end());
  double fd_error = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = x[j] + step;
    const double f_plus = oracle.value(probe);
    probe[j] = x[j] - step;
    const double f_minus = oracle.value(probe);
    probe[j] = x[j];
    const double forward = (f_plus - fx) / step;
    const double backward = (fx - f_minus) / step;
    const double central = (f_plus - f_minus) / (2 * step);
    // A kink shows up as an O(1) jump between the one-sided slopes; curvature
    // only as O(step). sqrt(step) separates the two regimes.
    if (std::abs(forward - backward) > std::sqrt(step) * (1.0 + std::abs(central)))
      report.is_smooth_point = false;
    fd_error = std::max(fd_error, std::abs(central - c[j]));
  }
  if (report.is_smooth_point) report.finite_difference_error = fd_error;

  std::mt19937_64 rng(seed);
  Vector y(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uniform_real_distribution<double> coord(box.lower()[j], box.upper()[j]);
      y[j] = coord(rng);
    }
    double lin = fx;
    for (std::size_t j = 0; j < n; ++j) lin += c[j] * (y[j] - x[j]);
    report.inequality_violation = std::max(report.inequality_violation, lin - oracle.value(y));
  }
  report.max_violation = std::max(report.finite_difference_error, report.inequality_violation);
  return report;
}

double max_over_box_vertices(const Box& box, const ConvexOracle& f) {
  return max_over_box_vertices(box, [&f](std::span<const double> x) { return f.value(x); });
}

}  // namespace dcpoly
