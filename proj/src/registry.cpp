#include "dcpoly/registry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dcpoly/error.hpp"

namespace dcpoly {

namespace pieces {

std::size_t first_active(std::span<const double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  const double tol = 1e-12 * (1.0 + std::abs(top));
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= top - tol) return i;
  return 0;
}

double sign0(double u) { return static_cast<double>((u > 0) - (u < 0)); }

}  // namespace pieces

namespace {

using pieces::first_active;
using pieces::sign0;

Vector filled(std::size_t n, double v) { return Vector(n, v); }

ConvexOracle make_oracle(std::size_t n, std::function<double(std::span<const double>)> eval,
                         std::function<Vector(std::span<const double>)> subgrad, std::string note = {}) {
  return ConvexOracle{n, std::move(eval), std::move(subgrad), std::move(note)};
}

// ---- Example 1 ---------------------------------------------------------------
// G(x) = 6x^2 - 12x + 8 + max{0, -x^3}
double ex1_big_g(double x) { return 6 * x * x - 12 * x + 8 + std::max(0.0, -x * x * x); }

double ex1_big_g_slope(double x) {
  const std::array<double, 2> tail{0.0, -x * x * x};
  const double tail_slope = first_active(tail) == 0 ? 0.0 : -3 * x * x;
  return 12 * x - 12 + tail_slope;
}

// -sqrt|a - x| and its derivative, 0 at the cusp.
double neg_sqrt_dist(double a, double x) { return -std::sqrt(std::abs(a - x)); }
double neg_sqrt_dist_slope(double a, double x) {
  const double d = std::abs(a - x);
  if (d == 0.0) return 0.0;
  return -sign0(x - a) / (2 * std::sqrt(d));
}

std::array<double, 3> ex1_h_pieces(double x) {
  return {neg_sqrt_dist(3, x) + ex1_big_g(x), neg_sqrt_dist(1, x) + ex1_big_g(x),
          std::max(0.0, x * x * x)};
}

DcProblem build_ex1() {
  auto guard = [](std::span<const double> x) {
    if (!(x[0] > 0)) throw DomainError("ex1 g needs x > 0 (contains -log x)", Vector(x.begin(), x.end()));
  };
  ConvexOracle g = make_oracle(
      1,
      [guard](std::span<const double> x) {
        guard(x);
        return ex1_big_g(x[0]) - std::log(x[0]);
      },
      [guard](std::span<const double> x) {
        guard(x);
        return Vector{ex1_big_g_slope(x[0]) - 1.0 / x[0]};
      },
      "requires x1 > 0");
  ConvexOracle h = make_oracle(
      1, [](std::span<const double> x) {
        const auto p = ex1_h_pieces(x[0]);
        return *std::max_element(p.begin(), p.end());
      },
      [](std::span<const double> x) {
        const double t = x[0];
        const auto p = ex1_h_pieces(t);
        switch (first_active(p)) {
          case 0: return Vector{neg_sqrt_dist_slope(3, t) + ex1_big_g_slope(t)};
          case 1: return Vector{neg_sqrt_dist_slope(1, t) + ex1_big_g_slope(t)};
          default: {
            const std::array<double, 2> inner{0.0, t * t * t};
            return Vector{first_active(inner) == 0 ? 0.0 : 3 * t * t};
          }
        }
      });
  return DcProblem{"ex1", "ex1", std::nullopt, std::move(g), std::move(h), Box({1.0}, {3.0}),
                   KnownOptimum{Vector{3.0}, -1.0 - std::log(3.0)}};
}

// ---- Example 2 ---------------------------------------------------------------
double ex2_inner(std::span<const double> x) { return 3 * x[0] + 2 * x[1] + std::abs(x[0] - x[1]); }

DcProblem build_ex2() {
  ConvexOracle g = make_oracle(
      2, [](std::span<const double> x) { return 5 * (x[0] * x[0] + x[1] * x[1]); },
      [](std::span<const double> x) { return Vector{10 * x[0], 10 * x[1]}; });
  auto root = [](std::span<const double> x) {
    const double u = ex2_inner(x);
    if (u < 0) throw DomainError("ex2 h needs 3x1 + 2x2 + |x1 - x2| >= 0", Vector(x.begin(), x.end()));
    return std::sqrt(u);
  };
  ConvexOracle h = make_oracle(
      2,
      [root](std::span<const double> x) { return std::sin(root(x)) + 5 * (x[0] * x[0] + x[1] * x[1]); },
      [root](std::span<const double> x) {
        const double r = root(x);
        Vector c{10 * x[0], 10 * x[1]};
        if (r > 0) {
          const double s = sign0(x[0] - x[1]);
          const double scale = std::cos(r) / (2 * r);
          c[0] += scale * (3 + s);
          c[1] += scale * (2 - s);
        }
        return c;
      },
      "requires 3x1 + 2x2 + |x1 - x2| >= 0");
  const double t = std::numbers::pi * std::numbers::pi / 20;  // 5t = (pi/2)^2
  return DcProblem{"ex2", "ex2", std::nullopt, std::move(g), std::move(h), Box({0, 0}, {5, 5}),
                   KnownOptimum{Vector{t, t}, -1.0}};
}

// ---- Example 3 ---------------------------------------------------------------
DcProblem build_ex3() {
  ConvexOracle g = make_oracle(
      2,
      [](std::span<const double> x) {
        const double p = x[0] * x[0] + 0.09 * x[0];
        const double q = x[1] * x[1] + 0.1 * x[1];
        return p * q + 7.5 * (x[0] * x[0] + x[1] * x[1]);
      },
      [](std::span<const double> x) {
        const double p = x[0] * x[0] + 0.09 * x[0];
        const double q = x[1] * x[1] + 0.1 * x[1];
        return Vector{(2 * x[0] + 0.09) * q + 15 * x[0], p * (2 * x[1] + 0.1) + 15 * x[1]};
      });
  ConvexOracle h = make_oracle(
      2, [](std::span<const double> x) { return 7.5 * (x[0] * x[0] + x[1] * x[1]); },
      [](std::span<const double> x) { return Vector{15 * x[0], 15 * x[1]}; });
  // (x1^2 + 0.09x1) peaks at 3.82 (x1 = -2); (x2^2 + 0.1x2) bottoms at -0.0025 (x2 = -0.05).
  return DcProblem{"ex3", "ex3", std::nullopt, std::move(g), std::move(h), Box({-2, -2}, {1, 1}),
                   KnownOptimum{Vector{-2.0, -0.05}, -0.00955}};
}

// ---- Example 4 ---------------------------------------------------------------
DcProblem build_ex4() {
  ConvexOracle g = make_oracle(
      2, [](std::span<const double> x) { return 0.25 * (x[0] + x[1]) * (x[0] + x[1]); },
      [](std::span<const double> x) {
        const double s = 0.5 * (x[0] + x[1]);
        return Vector{s, s};
      });
  ConvexOracle h = make_oracle(
      2, [](std::span<const double> x) { return 0.25 * (x[0] - x[1]) * (x[0] - x[1]); },
      [](std::span<const double> x) {
        const double d = 0.5 * (x[0] - x[1]);
        return Vector{d, -d};
      });
  return DcProblem{"ex4", "ex4", std::nullopt, std::move(g), std::move(h), Box({-2, -3}, {3, 4}),
                   KnownOptimum{Vector{3.0, -3.0}, -9.0}};
}

// ---- Example 5 ---------------------------------------------------------------
DcProblem build_ex5() {
  ConvexOracle g = make_oracle(
      2,
      [](std::span<const double> x) {
        return 1.03 * (x[0] * x[0] + x[1] * x[1]) - std::cos(x[0]) * std::cos(x[1]);
      },
      [](std::span<const double> x) {
        return Vector{2.06 * x[0] + std::sin(x[0]) * std::cos(x[1]),
                      2.06 * x[1] + std::cos(x[0]) * std::sin(x[1])};
      });
  ConvexOracle h = make_oracle(
      2, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; },
      [](std::span<const double> x) { return Vector{2 * x[0], 2 * x[1]}; });
  return DcProblem{"ex5", "ex5", std::nullopt, std::move(g), std::move(h), Box({-6, -5}, {4, 2}),
                   KnownOptimum{Vector{0.0, 0.0}, -1.0}};
}

// ---- Example 6 ---------------------------------------------------------------
double squared_norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

DcProblem build_ex6(std::size_t n, int m) {
  static constexpr std::array<double, 3> centers{4.0, 2.5, 7.5};
  static constexpr std::array<double, 3> shifts{0.70, 0.73, 0.76};
  const auto terms = static_cast<std::size_t>(m);
  auto dist2 = [](std::span<const double> x, double a) {
    double s = 0;
    for (double v : x) s += (v - a) * (v - a);
    return s;
  };
  ConvexOracle g = make_oracle(
      n,
      [terms, dist2](std::span<const double> x) {
        double f = 0;
        for (std::size_t i = 0; i < terms; ++i) f -= 1.0 / (dist2(x, centers[i]) + shifts[i]);
        return f + squared_norm(x);
      },
      [n, terms, dist2](std::span<const double> x) {
        Vector c(n);
        for (std::size_t j = 0; j < n; ++j) c[j] = 2 * x[j];
        for (std::size_t i = 0; i < terms; ++i) {
          const double denom = dist2(x, centers[i]) + shifts[i];
          const double w = 2.0 / (denom * denom);
          for (std::size_t j = 0; j < n; ++j) c[j] += w * (x[j] - centers[i]);
        }
        return c;
      });
  ConvexOracle h = make_oracle(
      n, [](std::span<const double> x) { return squared_norm(x); },
      [n](std::span<const double> x) {
        Vector c(n);
        for (std::size_t j = 0; j < n; ++j) c[j] = 2 * x[j];
        return c;
      });
  std::string name = "ex6:n=" + std::to_string(n) + ",m=" + std::to_string(m);
  return DcProblem{std::move(name), "ex6", m, std::move(g), std::move(h),
                   Box(filled(n, 0.0), filled(n, 10.0)), std::nullopt};
}

// ---- Example 7 ---------------------------------------------------------------
// 200 * max{0, |a| - b} with its lowest-index subgradient, written into c.
double hinge_abs(double a, double b, double weight, std::size_t ia, std::size_t ib, Vector* c) {
  const std::array<double, 2> p{0.0, std::abs(a) - b};
  if (first_active(p) == 0) return 0.0;
  if (c) {
    (*c)[ia] += weight * sign0(a);
    (*c)[ib] -= weight;
  }
  return weight * p[1];
}

double abs_term(double u, double weight, std::span<const std::pair<std::size_t, double>> coeffs, Vector* c) {
  if (c)
    for (auto [j, a] : coeffs) (*c)[j] += weight * sign0(u) * a;
  return weight * std::abs(u);
}

double ex7_g(std::span<const double> x, Vector* c) {
  using P = std::pair<std::size_t, double>;
  double v = 0;
  v += abs_term(x[0] - 1, 1.0, std::array{P{0, 1.0}}, c);
  v += hinge_abs(x[0], x[1], 200.0, 0, 1, c);
  v += hinge_abs(x[2], x[3], 180.0, 2, 3, c);
  v += abs_term(x[2] - 1, 1.0, std::array{P{2, 1.0}}, c);
  v += abs_term(x[1] - 1, 10.1, std::array{P{1, 1.0}}, c);
  v += abs_term(x[3] - 1, 10.1, std::array{P{3, 1.0}}, c);
  v += abs_term(x[1] + x[3] - 2, 4.95, std::array{P{1, 1.0}, P{3, 1.0}}, c);
  return v;
}

double ex7_h(std::span<const double> x, Vector* c) {
  using P = std::pair<std::size_t, double>;
  double v = 0;
  v += abs_term(x[0], 100.0, std::array{P{0, 1.0}}, c) - 100.0 * x[1];
  v += abs_term(x[2], 90.0, std::array{P{2, 1.0}}, c) - 90.0 * x[3];
  if (c) {
    (*c)[1] -= 100.0;
    (*c)[3] -= 90.0;
  }
  v += abs_term(x[1] - x[3], 4.95, std::array{P{1, 1.0}, P{3, -1.0}}, c);
  return v;
}

DcProblem build_ex7() {
  ConvexOracle g = make_oracle(
      4, [](std::span<const double> x) { return ex7_g(x, nullptr); },
      [](std::span<const double> x) {
        Vector c(4, 0.0);
        ex7_g(x, &c);
        return c;
      });
  ConvexOracle h = make_oracle(
      4, [](std::span<const double> x) { return ex7_h(x, nullptr); },
      [](std::span<const double> x) {
        Vector c(4, 0.0);
        ex7_h(x, &c);
        return c;
      });
  return DcProblem{"ex7", "ex7", std::nullopt, std::move(g), std::move(h),
                   Box(filled(4, -10.0), filled(4, 10.0)), KnownOptimum{filled(4, 1.0), 0.0}};
}

// ---- Example 8 ---------------------------------------------------------------
double ex8_g(std::span<const double> x, Vector* c) {
  using P = std::pair<std::size_t, double>;
  double v = abs_term(x[0] - 1, 1.0, std::array{P{0, 1.0}}, c);
  for (std::size_t i = 1; i < x.size(); ++i) v += hinge_abs(x[i - 1], x[i], 200.0, i - 1, i, c);
  return v;
}

double ex8_h(std::span<const double> x, Vector* c) {
  using P = std::pair<std::size_t, double>;
  double v = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    v += abs_term(x[i - 1], 100.0, std::array{P{i - 1, 1.0}}, c) - 100.0 * x[i];
    if (c) (*c)[i] -= 100.0;
  }
  return v;
}

DcProblem build_ex8(std::size_t n) {
  ConvexOracle g = make_oracle(
      n, [](std::span<const double> x) { return ex8_g(x, nullptr); },
      [n](std::span<const double> x) {
        Vector c(n, 0.0);
        ex8_g(x, &c);
        return c;
      });
  ConvexOracle h = make_oracle(
      n, [](std::span<const double> x) { return ex8_h(x, nullptr); },
      [n](std::span<const double> x) {
        Vector c(n, 0.0);
        ex8_h(x, &c);
        return c;
      });
  return DcProblem{"ex8:n=" + std::to_string(n), "ex8", std::nullopt, std::move(g), std::move(h),
                   Box(filled(n, -10.0), filled(n, 10.0)), KnownOptimum{filled(n, 1.0), 0.0}};
}

[[noreturn]] void reject(const std::string& why) {
  throw InvalidInput(why + "; valid problems: " + registry_valid_combinations());
}

int require_in(const std::string& id, const char* key, std::optional<int> value, std::initializer_list<int> allowed) {
  const int v = value.value_or(*allowed.begin());
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
    reject(id + " does not accept " + key + "=" + std::to_string(v));
  return v;
}

}  // namespace

std::string registry_valid_combinations() {
  return "ex1 (n=1), ex2, ex3, ex4, ex5 (n=2), ex6:n={2,3},m={2,3}, ex7 (n=4), ex8:n={2,3,4,5}";
}

ProblemSpec parse_problem_spec(std::string_view text) {
  ProblemSpec spec;
  const auto colon = text.find(':');
  spec.id = std::string(text.substr(0, colon));
  if (spec.id.empty()) reject("empty problem id");
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) reject("malformed parameter '" + std::string(item) + "'");
    int value = 0;
    const std::string_view digits = item.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
      reject("parameter '" + std::string(item) + "' is not an integer");
    spec.params[std::string(item.substr(0, eq))] = value;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

DcProblem registry_build(std::string_view example_id, std::optional<int> n,
                         const std::map<std::string, int>& params) {
  const std::string id(example_id);
  std::optional<int> m;
  for (const auto& [key, value] : params) {
    if (key == "n") {
      if (n && *n != value) reject("conflicting values for n");
      n = value;
    } else if (key == "m") {
      m = value;
    } else {
      reject("unknown parameter '" + key + "'");
    }
  }
  if (m && id != "ex6") reject(id + " takes no parameter m");

  if (id == "ex1") return require_in(id, "n", n, {1}), build_ex1();
  if (id == "ex2") return require_in(id, "n", n, {2}), build_ex2();
  if (id == "ex3") return require_in(id, "n", n, {2}), build_ex3();
  if (id == "ex4") return require_in(id, "n", n, {2}), build_ex4();
  if (id == "ex5") return require_in(id, "n", n, {2}), build_ex5();
  if (id == "ex6") {
    const int dim = require_in(id, "n", n, {2, 3});
    return build_ex6(static_cast<std::size_t>(dim), require_in(id, "m", m, {2, 3}));
  }
  if (id == "ex7") return require_in(id, "n", n, {4}), build_ex7();
  if (id == "ex8") return build_ex8(static_cast<std::size_t>(require_in(id, "n", n, {2, 3, 4, 5})));
  reject("unknown problem '" + id + "'");
}

DcProblem registry_build(const ProblemSpec& spec) { return registry_build(spec.id, std::nullopt, spec.params); }

DcProblem registry_build_spec(std::string_view text) { return registry_build(parse_problem_spec(text)); }

}  // namespace dcpoly
