#include "dcpoly/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

#include "dcpoly/error.hpp"

namespace dcpoly {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::alg1: return "alg1";
    case Algorithm::alg2: return "alg2";
    case Algorithm::alg3: return "alg3";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view text) {
  if (text == "alg1") return Algorithm::alg1;
  if (text == "alg2") return Algorithm::alg2;
  if (text == "alg3") return Algorithm::alg3;
  throw InvalidInput("unknown algorithm '" + std::string(text) + "' (expected alg1, alg2 or alg3)");
}

void SolveConfig::validate() const {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be finite and >= 0");
  if (max_iterations == 0) throw InvalidInput("max_iterations must be >= 1");
  if (!(time_limit > 0)) throw InvalidInput("time limit must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr std::size_t kTailLength = 10;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Smallest height - h(point), ties to the lexicographically smallest vertex.
std::pair<std::size_t, double> argmin_score(const EpigraphPoly& poly, const detail::VertexValueCache& h) {
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) {
    const double score = poly.height(i) - h[i];
    if (score < best_score || (score == best_score && detail::lex_less(poly, i, best))) {
      best = i;
      best_score = score;
    }
  }
  return {best, best_score};
}

void check_problem(const DcProblem& problem) {
  if (problem.g.dim != problem.dim() || problem.h.dim != problem.dim())
    throw InvalidInput("problem '" + problem.name + "': oracle and box dimensions differ");
}

}  // namespace

SolveReport solve_direct(const DcProblem& problem, const SolveConfig& cfg) {
  cfg.validate();
  check_problem(problem);
  const auto start = Clock::now();
  const ConvexOracle& g = problem.g;

  EpigraphPoly poly(problem.box, supporting_cut(g, problem.box.center()));
  detail::VertexValueCache hval;
  hval.sync(poly, problem.h, cfg.workers);

  SolveReport report;
  report.problem = problem.name;
  report.n = problem.dim();
  report.epsilon = cfg.epsilon;
  report.algorithm = "alg3";
  if (cfg.record_bounds) report.bounds_history.emplace();

  double best = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  Termination why = Termination::gap_met;
  double lower = -std::numeric_limits<double>::infinity();
  while (true) {
    ++k;
    const auto [idx, score] = argmin_score(poly, hval);
    Vector x = poly.point(idx);
    const double y = poly.height(idx);
    double gx = 0.0;
    try {
      gx = g.value(x);
    } catch (const DomainError& e) {
      throw DomainError("iteration " + std::to_string(k) + ": " + e.what(), e.point());
    }
    const double hx = hval[idx];
    lower = score;
    const double upper = gx - hx;
    if (cfg.record_bounds) report.bounds_history->push_back({k, score, upper});
    if (upper < best) {
      best = upper;
      report.x_best = x;
    }
    report.x_tail.push_back(x);
    if (report.x_tail.size() > kTailLength) report.x_tail.erase(report.x_tail.begin());

    if (!(gx - y > cfg.epsilon)) break;
    if (k >= cfg.max_iterations) {
      why = Termination::iteration_cap;
      break;
    }
    if (seconds_since(start) >= cfg.time_limit) {
      why = Termination::time_limit;
      break;
    }
    try {
      Vector c = g.subgradient(x);
      poly.add_cut(AffineMinorant::from_anchor(x, gx, std::move(c)));
      hval.sync(poly, problem.h, cfg.workers);
    } catch (const DomainError& e) {
      throw DomainError("iteration " + std::to_string(k) + ": " + e.what(), e.point());
    }
    ++report.cuts;
    if (cfg.after_cut) cfg.after_cut(k, x, poly);
  }

  report.f_best = best;
  report.upper_bound = best;
  report.lower_bound = lower;
  report.iterations = k;
  report.terminated_by = why;
  report.elapsed_seconds = seconds_since(start);
  spdlog::debug("direct solve {}: {} after {} iterations, f = {:.8g}, lower = {:.8g}", problem.name,
                to_string(why), k, report.f_best, report.lower_bound);
  return report;
}

SolveReport solve_on_underestimator(const DcProblem& problem, const ApproxResult& approx) {
  check_problem(problem);
  if (approx.poly.dim() != problem.dim()) throw InvalidInput("underestimator dimension does not match the problem");
  const auto start = Clock::now();
  detail::VertexValueCache hval;
  hval.sync(approx.poly, problem.h, 1);
  const auto [idx, score] = argmin_score(approx.poly, hval);

  SolveReport report;
  report.problem = problem.name;
  report.n = problem.dim();
  report.epsilon = approx.epsilon;
  report.x_best = approx.poly.point(idx);
  report.f_best = problem.g.value(report.x_best) - hval[idx];
  report.upper_bound = report.f_best;
  report.lower_bound = score;
  report.iterations = approx.iterations;
  report.cuts = approx.cuts_added;
  report.terminated_by = approx.terminated_by;
  report.elapsed_seconds = approx.elapsed_seconds + seconds_since(start);
  report.x_tail.push_back(report.x_best);
  return report;
}

SolveReport solve_via_approximation(const DcProblem& problem, const ApproxResult& approx) {
  if (approx.terminated_by != Termination::gap_met)
    throw InvalidInput("underestimator stopped by " + std::string(to_string(approx.terminated_by)) +
                       "; no epsilon certificate available");
  return solve_on_underestimator(problem, approx);
}

bool bound_sandwich_check(const SolveReport& report, const DcProblem& problem) {
  if (!problem.known_optimum) throw InvalidInput("problem '" + problem.name + "' has no known optimum");
  if (!report.bounds_history) throw InvalidInput("report has no bounds history (record_bounds was off)");
  const double z = problem.known_optimum->z_star;
  for (const auto& rec : *report.bounds_history) {
    if (rec.a_k > z + 1e-7 || rec.b_k < z - 1e-7) return false;
  }
  return true;
}

SolveReport solve_with(const DcProblem& problem, Algorithm algorithm, const SolveConfig& cfg,
                       std::size_t max_cuts_per_iteration) {
  if (algorithm == Algorithm::alg3) return solve_direct(problem, cfg);
  cfg.validate();
  ApproxConfig acfg;
  acfg.epsilon = cfg.epsilon;
  acfg.max_iterations = cfg.max_iterations;
  acfg.max_cuts_per_iteration = max_cuts_per_iteration;
  acfg.time_limit = cfg.time_limit;
  acfg.workers = cfg.workers;
  const ApproxResult approx = algorithm == Algorithm::alg1 ? approximate_single_cut(problem.g, problem.box, acfg)
                                                           : approximate_multi_cut(problem.g, problem.box, acfg);
  SolveReport report = solve_on_underestimator(problem, approx);
  report.algorithm = std::string(to_string(algorithm));
  return report;
}

}  // namespace dcpoly
