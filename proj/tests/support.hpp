#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <dcpoly/affine.hpp>
#include <dcpoly/box.hpp>
#include <dcpoly/epigraph.hpp>
#include <dcpoly/oracle.hpp>

namespace testing {

using dcpoly::AffineMinorant;
using dcpoly::Box;
using dcpoly::ConvexOracle;
using dcpoly::Vector;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector uniform_point(std::mt19937_64& rng, const Box& box) {
  Vector x(box.dim());
  for (std::size_t j = 0; j < box.dim(); ++j) x[j] = uniform(rng, box.lower()[j], box.upper()[j]);
  return x;
}

inline Box random_box(std::mt19937_64& rng, std::size_t n) {
  Vector lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = uniform(rng, -5.0, 2.0);
    hi[j] = lo[j] + uniform(rng, 0.5, 6.0);
  }
  return Box(lo, hi);
}

/// Tangent planes of a random convex quadratic at random box points, so every
/// cut is an upward one that actually touches the current epigraph.
inline std::vector<AffineMinorant> random_cuts(std::mt19937_64& rng, const Box& box, std::size_t count) {
  const std::size_t n = box.dim();
  Vector w(n), c(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = uniform(rng, 0.2, 3.0);
    c[j] = uniform(rng, box.lower()[j], box.upper()[j]);
  }
  std::vector<AffineMinorant> cuts;
  for (std::size_t k = 0; k < count; ++k) {
    Vector x = uniform_point(rng, box);
    // Some cuts go through box corners to exercise degenerate vertices.
    if (k % 3 == 2)
      for (std::size_t j = 0; j < n; ++j) x[j] = (rng() & 1) ? box.upper()[j] : box.lower()[j];
    double v = 0.0;
    Vector grad(n);
    for (std::size_t j = 0; j < n; ++j) {
      v += w[j] * (x[j] - c[j]) * (x[j] - c[j]);
      grad[j] = 2.0 * w[j] * (x[j] - c[j]);
    }
    cuts.push_back(AffineMinorant::from_anchor(x, v, grad));
  }
  return cuts;
}

inline ConvexOracle quadratic_oracle(std::size_t n) {
  return ConvexOracle{
      n,
      [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
      },
      [](std::span<const double> x) {
        Vector g(x.begin(), x.end());
        for (double& v : g) v *= 2.0;
        return g;
      },
      ""};
}

inline ConvexOracle affine_oracle(Vector a, double b) {
  const std::size_t n = a.size();
  return ConvexOracle{
      n,
      [a, b](std::span<const double> x) {
        double s = b;
        for (std::size_t j = 0; j < x.size(); ++j) s += a[j] * x[j];
        return s;
      },
      [a](std::span<const double>) { return a; },
      ""};
}

inline ConvexOracle zero_oracle(std::size_t n) { return affine_oracle(Vector(n, 0.0), 0.0); }

struct PointHeight {
  Vector point;
  double height;
};

inline std::vector<PointHeight> as_points(const std::vector<dcpoly::LiftedVertex>& vs) {
  std::vector<PointHeight> out;
  for (const auto& v : vs) out.push_back({v.point, v.height});
  return out;
}

inline std::vector<PointHeight> as_points(const dcpoly::EpigraphPoly& poly) { return as_points(poly.vertices()); }

inline double distance(const PointHeight& a, const PointHeight& b) {
  double s = (a.height - b.height) * (a.height - b.height);
  for (std::size_t j = 0; j < a.point.size(); ++j) s += (a.point[j] - b.point[j]) * (a.point[j] - b.point[j]);
  return std::sqrt(s);
}

/// Set equality up to tol: same size and every element has a partner.
inline bool same_set(const std::vector<PointHeight>& a, const std::vector<PointHeight>& b, double tol) {
  if (a.size() != b.size()) return false;
  auto covered = [tol](const auto& xs, const auto& ys) {
    return std::all_of(xs.begin(), xs.end(), [&](const PointHeight& p) {
      return std::any_of(ys.begin(), ys.end(), [&](const PointHeight& q) { return distance(p, q) <= tol; });
    });
  };
  return covered(a, b) && covered(b, a);
}

inline std::vector<PointHeight> points(std::initializer_list<std::pair<Vector, double>> list) {
  std::vector<PointHeight> out;
  for (const auto& [p, h] : list) out.push_back({p, h});
  return out;
}

}  // namespace testing
