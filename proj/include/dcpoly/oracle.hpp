#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "dcpoly/affine.hpp"
#include "dcpoly/box.hpp"

namespace dcpoly {

/// A convex function with a deterministic subgradient selection.
///
/// Both callables must be pure: the same point gives bitwise-identical
/// results, and concurrent calls are allowed. Evaluating outside the domain
/// throws DomainError.
struct ConvexOracle {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> eval;
  std::function<Vector(std::span<const double>)> subgrad;
  std::string domain_note;

  double value(std::span<const double> x) const;
  Vector subgradient(std::span<const double> x) const;
};

struct KnownOptimum {
  std::optional<Vector> x_star;  // some problems only publish the value
  double z_star = 0.0;
};

/// min_{x in box} g(x) - h(x).
struct DcProblem {
  std::string name;  // canonical registry spec, e.g. "ex6:n=3,m=2"
  std::string id;    // "ex6"
  std::optional<int> m;
  ConvexOracle g;
  ConvexOracle h;
  Box box;
  std::optional<KnownOptimum> known_optimum;

  std::size_t dim() const noexcept { return box.dim(); }
  double objective(std::span<const double> x) const { return g.value(x) - h.value(x); }
};

/// s(x) = g(x_bar) + c(x_bar)^T (x - x_bar); s(x_bar) == g(x_bar) exactly.
AffineMinorant supporting_cut(const ConvexOracle& g, std::span<const double> x_bar);

struct SubgradientCheck {
  double max_violation = 0.0;
  bool is_smooth_point = false;
  double finite_difference_error = 0.0;  // only meaningful at smooth points
  double inequality_violation = 0.0;     // worst of c^T(y-x) + f(x) - f(y) over samples
};

/// Compares the oracle's subgradient at x against central differences (when
/// one-sided differences agree, i.e. x looks smooth) and checks the
/// subgradient inequality on `samples` uniform points of the box.
SubgradientCheck validate_subgradient(const ConvexOracle& oracle, const Box& box,
                                      std::span<const double> x, double step,
                                      std::uint64_t seed = 0, std::size_t samples = 100);

double max_over_box_vertices(const Box& box, const ConvexOracle& f);

}  // namespace dcpoly
