#include "dcpoly/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dcpoly/bench.hpp"
#include "dcpoly/error.hpp"
#include "dcpoly/io.hpp"
#include "dcpoly/registry.hpp"
#include "dcpoly/solver.hpp"
#include "dcpoly/underestimator.hpp"

namespace dcpoly {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUncertified = 2;

struct Options {
  std::string problem = "ex1";
  double epsilon = 0.1;
  std::string algorithm;
  double time_limit = 600.0;
  std::optional<std::size_t> max_iterations;
  std::size_t max_cuts_per_iteration = 4096;
  std::string out_path;
  std::string format;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  bool no_timing = false;

  std::vector<std::string> bench_problems;
  std::vector<double> bench_eps;
  std::vector<std::string> bench_algs;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("dcpoly");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DCPOLY_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

void write_artifact(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw InvalidInput("failed writing '" + path + "'");
}

void add_common(CLI::App* cmd, Options& o, bool single_problem) {
  if (single_problem) {
    cmd->add_option("--problem", o.problem, "registry id, e.g. ex4 or ex6:n=3,m=2");
    cmd->add_option("--eps", o.epsilon, "target accuracy")->check(CLI::NonNegativeNumber);
    cmd->add_option("--alg", o.algorithm, "alg1, alg2 or alg3");
  }
  cmd->add_option("--time-limit", o.time_limit, "seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iterations, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-cuts-per-iter", o.max_cuts_per_iteration, "multi-cut cap per pass")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out_path, "write the machine artifact here");
  cmd->add_option("--format", o.format, "csv, json or markdown");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "seed for sampled checks");
  cmd->add_flag("--no-timing", o.no_timing, "write zero for wall-clock fields");
}

std::string point_str(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + fmt::format("{:.6f}", x[i]);
  return s + ")";
}

int run_approx(const Options& o, std::ostream& out) {
  const Algorithm alg = algorithm_from_string(o.algorithm.empty() ? "alg2" : o.algorithm);
  if (alg == Algorithm::alg3) throw InvalidInput("approx runs alg1 or alg2");
  const std::string format = o.format.empty() ? "json" : o.format;
  if (format != "json" && format != "csv") throw InvalidInput("approx writes json (polyhedron) or csv (history)");
  const DcProblem problem = registry_build_spec(o.problem);
  ApproxConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.max_iterations = o.max_iterations.value_or(cfg.max_iterations);
  cfg.max_cuts_per_iteration = o.max_cuts_per_iteration;
  cfg.time_limit = o.time_limit;
  cfg.workers = o.workers;
  cfg.record_history = format == "csv";
  cfg.validate();

  ApproxResult res = alg == Algorithm::alg1 ? approximate_single_cut(problem.g, problem.box, cfg)
                                            : approximate_multi_cut(problem.g, problem.box, cfg);
  if (o.no_timing) {
    res.elapsed_seconds = 0.0;
    for (auto& r : res.history) r.elapsed_seconds = 0.0;
  }

  // Sampled check of 0 <= g - g^k <= eps at uniform random points.
  std::mt19937_64 rng(o.seed);
  const Box& box = problem.box;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  Vector x(box.dim());
  for (int s = 0; s < 10000; ++s) {
    for (std::size_t j = 0; j < box.dim(); ++j)
      x[j] = std::uniform_real_distribution<double>(box.lower()[j], box.upper()[j])(rng);
    const double d = problem.g.value(x) - res.poly.underestimate(x);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }

  out << fmt::format("problem={} algorithm={} epsilon={}\n", problem.name, to_string(alg), format_double(o.epsilon));
  out << fmt::format("terminated_by={} iterations={} cuts={} vertices={} minorants={}\n",
                     to_string(res.terminated_by), res.iterations, res.cuts_added, res.poly.vertex_count(),
                     res.minorants().size());
  out << fmt::format("final_gap={:.6e}\n", res.final_gap);
  out << fmt::format("sampled g-g^k over 10000 points (seed {}): min={:.3e} max={:.3e}\n", o.seed, lo, hi);
  if (!o.no_timing) out << fmt::format("elapsed_seconds={:.3f}\n", res.elapsed_seconds);

  if (!o.out_path.empty())
    write_artifact(o.out_path, format == "json" ? to_json(res.poly).dump(2) + "\n" : history_csv(res.history));
  return res.terminated_by == Termination::gap_met ? kExitOk : kExitUncertified;
}

int run_solve(const Options& o, std::ostream& out) {
  const Algorithm alg = algorithm_from_string(o.algorithm.empty() ? "alg3" : o.algorithm);
  const std::string format = o.format.empty() ? "json" : o.format;
  if (format != "json" && format != "csv") throw InvalidInput("solve writes json (report) or csv (bounds)");
  const DcProblem problem = registry_build_spec(o.problem);
  SolveConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.max_iterations = o.max_iterations.value_or(cfg.max_iterations);
  cfg.time_limit = o.time_limit;
  cfg.workers = o.workers;
  cfg.record_bounds = alg == Algorithm::alg3;
  cfg.validate();

  SolveReport rep = solve_with(problem, alg, cfg, o.max_cuts_per_iteration);
  if (o.no_timing) rep.elapsed_seconds = 0.0;

  out << fmt::format("problem={} algorithm={} epsilon={}\n", rep.problem, rep.algorithm, format_double(rep.epsilon));
  out << fmt::format("f_best={:.6f}\n", rep.f_best);
  out << fmt::format("x_best={}\n", point_str(rep.x_best));
  out << fmt::format("lower_bound={:.6f} certificate_gap={:.3e}\n", rep.lower_bound, rep.f_best - rep.lower_bound);
  out << fmt::format("terminated_by={} iterations={} cuts={}\n", to_string(rep.terminated_by), rep.iterations,
                     rep.cuts);
  if (problem.known_optimum)
    out << fmt::format("known z*={:.6f} error={:.3e}\n", problem.known_optimum->z_star,
                       rep.f_best - problem.known_optimum->z_star);
  if (!o.no_timing) out << fmt::format("elapsed_seconds={:.3f}\n", rep.elapsed_seconds);

  if (!o.out_path.empty()) {
    if (format == "json") {
      write_artifact(o.out_path, to_json(rep).dump(2) + "\n");
    } else {
      if (!rep.bounds_history) throw InvalidInput("bounds csv is only recorded by alg3");
      write_artifact(o.out_path, bounds_csv(*rep.bounds_history));
    }
  }
  return rep.certified() ? kExitOk : kExitUncertified;
}

int run_bench(const Options& o, std::ostream& out) {
  const TableFormat format = table_format_from_string(o.format.empty() ? "markdown" : o.format);
  std::vector<std::string> problems = o.bench_problems;
  if (problems.empty()) problems = {"ex1", "ex2", "ex3", "ex4", "ex5"};
  for (const auto& p : problems) registry_build_spec(p);  // reject bad ids before running anything
  std::vector<double> eps = o.bench_eps;
  if (eps.empty()) eps = {1.0, 0.1, 0.01};
  std::vector<Algorithm> algs;
  for (const auto& a : o.bench_algs) algs.push_back(algorithm_from_string(a));
  if (algs.empty()) algs = {Algorithm::alg1, Algorithm::alg2, Algorithm::alg3};

  BenchConfig cfg;
  cfg.time_limit = o.time_limit;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.max_iterations = o.max_iterations.value_or(cfg.max_iterations);
  cfg.max_cuts_per_iteration = o.max_cuts_per_iteration;
  BenchSuite suite = run_suite(problems, eps, algs, cfg);
  if (o.no_timing)
    for (auto& r : suite.rows) r.time_seconds = 0.0;

  const std::string table = emit_table(suite, format);
  out << table;
  if (!o.out_path.empty()) write_artifact(o.out_path, table);

  bool any_failed = false, any_uncertified = false;
  for (const auto& r : suite.rows) {
    any_failed |= r.failed();
    any_uncertified |= !r.certified;
  }
  if (any_failed) return kExitError;
  return any_uncertified ? kExitUncertified : kExitOk;
}

int run_convergence(const Options& o, std::ostream& out) {
  const Algorithm alg = algorithm_from_string(o.algorithm.empty() ? "alg1" : o.algorithm);
  if (!o.format.empty() && o.format != "csv") throw InvalidInput("convergence writes csv");
  const ConvergenceStudy study = convergence_study(o.problem, alg, o.max_iterations.value_or(200));
  out << fmt::format("problem={} algorithm={} iterations={}\n", o.problem, to_string(alg), study.result.iterations);
  out << fmt::format("final_gap={:.6e}\n", study.result.final_gap);
  if (study.profile.slope_defined) {
    out << fmt::format("loglog_slope={:.4f} cummin_slope={:.4f}\n", study.profile.loglog_slope,
                       study.profile.cummin_slope);
  } else {
    out << "loglog_slope=undefined (gap reached zero)\n";
  }
  if (!o.out_path.empty()) write_artifact(o.out_path, study.csv);
  return kExitOk;
}

}  // namespace

int parse_and_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  static const bool logging_ready = (configure_logging(), true);
  (void)logging_ready;

  CLI::App app{"DC global optimization by polyhedral underestimation", "dcpoly"};
  app.require_subcommand(1);
  Options o;
  CLI::App* approx = app.add_subcommand("approx", "build an epsilon-underestimator of g");
  CLI::App* solve = app.add_subcommand("solve", "minimize g - h over the box");
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark grid");
  CLI::App* conv = app.add_subcommand("convergence", "gap decay with epsilon = 0");
  for (CLI::App* c : {approx, solve, conv}) add_common(c, o, true);
  add_common(bench, o, false);
  bench->add_option("--problem", o.bench_problems, "registry id (repeatable)");
  bench->add_option("--eps", o.bench_eps, "accuracy (repeatable)")->check(CLI::NonNegativeNumber);
  bench->add_option("--alg", o.bench_algs, "algorithm (repeatable)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitError;
  }

  try {
    if (approx->parsed()) return run_approx(o, out);
    if (solve->parsed()) return run_solve(o, out);
    if (bench->parsed()) return run_bench(o, out);
    return run_convergence(o, out);
  } catch (const InvalidInput& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace dcpoly
