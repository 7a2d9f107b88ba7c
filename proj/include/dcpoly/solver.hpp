#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcpoly/oracle.hpp"
#include "dcpoly/underestimator.hpp"

namespace dcpoly {

enum class Algorithm { alg1, alg2, alg3 };

std::string_view to_string(Algorithm a) noexcept;
Algorithm algorithm_from_string(std::string_view text);

struct SolveConfig {
  double epsilon = 0.1;
  std::size_t max_iterations = 100000;
  double time_limit = 600.0;
  bool record_bounds = false;
  std::size_t workers = 1;
  /// Called after each cut with (k, x^k, polyhedron after the cut).
  std::function<void(std::size_t, std::span<const double>, const EpigraphPoly&)> after_cut;

  void validate() const;
};

struct BoundRecord {
  std::size_t k = 0;
  double a_k = 0.0;  // y^k - h(x^k), a global lower bound
  double b_k = 0.0;  // g(x^k) - h(x^k), a global upper bound
};

struct SolveReport {
  std::string problem;
  std::size_t n = 0;
  double epsilon = 0.0;
  std::string algorithm;
  Vector x_best;
  double f_best = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::size_t iterations = 0;
  std::size_t cuts = 0;
  double elapsed_seconds = 0.0;
  Termination terminated_by = Termination::gap_met;
  std::optional<std::vector<BoundRecord>> bounds_history;
  std::vector<Vector> x_tail;  // last iterates, for limit-point inspection

  bool certified() const noexcept { return terminated_by == Termination::gap_met; }
};

/// Direct solve: at each step minimize y - h(x) over the vertices of the
/// current outer approximation and cut at the minimizer until
/// g(x^k) - y^k <= epsilon. On gap_met the returned point is an
/// epsilon-solution and f_best - lower_bound <= epsilon.
SolveReport solve_direct(const DcProblem& problem, const SolveConfig& cfg);

/// Minimizes height - h(point) over the vertices of an epsilon-underestimator
/// of g. Throws InvalidInput unless approx terminated with gap_met.
SolveReport solve_via_approximation(const DcProblem& problem, const ApproxResult& approx);

/// Same vertex scan without the certificate requirement; terminated_by is
/// copied from approx, so an unconverged approximation yields an uncertified
/// report whose lower bound is still valid.
SolveReport solve_on_underestimator(const DcProblem& problem, const ApproxResult& approx);

/// True iff every recorded a_k <= z* + 1e-7 and b_k >= z* - 1e-7. Throws
/// InvalidInput when the problem has no known optimum or no bounds history.
bool bound_sandwich_check(const SolveReport& report, const DcProblem& problem);

/// Runs the named pipeline: alg3 is solve_direct; alg1/alg2 build an
/// underestimator and then scan it.
SolveReport solve_with(const DcProblem& problem, Algorithm algorithm, const SolveConfig& cfg,
                       std::size_t max_cuts_per_iteration = 4096);

}  // namespace dcpoly
