#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcpoly/solver.hpp"
#include "dcpoly/underestimator.hpp"

namespace dcpoly {

struct BenchRow {
  std::string example;  // registry spec, e.g. "ex6:n=2,m=3"
  std::size_t n = 0;
  std::optional<int> m;
  double epsilon = 0.0;
  Algorithm algorithm = Algorithm::alg3;
  double time_seconds = 0.0;
  double value = 0.0;
  bool certified = false;
  double lower_bound = 0.0;
  std::optional<double> z_star;
  std::string status;  // "gap_met", "iteration_cap", "time_limit" or "failed: <reason>"

  bool failed() const { return status.starts_with("failed"); }
};

struct BenchConfig {
  double time_limit = 600.0;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t max_iterations = 100000;
  std::size_t max_cuts_per_iteration = 4096;
};

struct BenchSuite {
  std::vector<BenchRow> rows;
  BenchConfig config;
};

/// Runs every (example, epsilon, algorithm) cell. Registry or oracle errors
/// mark the cell as failed instead of aborting the suite. With
/// cfg.workers > 1 cells run concurrently, each single-threaded.
BenchSuite run_suite(std::span<const std::string> examples, std::span<const double> epsilons,
                     std::span<const Algorithm> algorithms, const BenchConfig& cfg);
BenchSuite run_suite(std::span<const std::string> examples, std::span<const double> epsilons,
                     std::span<const Algorithm> algorithms, double time_limit);

enum class TableFormat { csv, json, markdown };
TableFormat table_format_from_string(std::string_view text);

/// CSV columns: example,n,m,epsilon,algorithm,time_seconds,value,lower_bound,certified.
/// JSON: {config, rows}. Markdown: one line per (example, epsilon) with a
/// time/value pair per algorithm.
std::string emit_table(const BenchSuite& suite, TableFormat format);

nlohmann::json to_json(const BenchSuite& suite);
BenchSuite suite_from_json(const nlohmann::json& doc);

struct ConvergenceStudy {
  std::string csv;  // k,max_gap
  ConvergenceProfile profile;
  ApproxResult result;
};

/// Runs alg1 or alg2 with epsilon = 0 for `iterations` steps and fits the
/// log-log decay of the max vertex gap.
ConvergenceStudy convergence_study(const ConvexOracle& g, const Box& box, Algorithm algorithm,
                                   std::size_t iterations);
ConvergenceStudy convergence_study(const std::string& example, Algorithm algorithm, std::size_t iterations);

}  // namespace dcpoly
