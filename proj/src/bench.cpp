#include "dcpoly/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dcpoly/error.hpp"
#include "dcpoly/io.hpp"
#include "dcpoly/parallel.hpp"
#include "dcpoly/registry.hpp"

namespace dcpoly {
namespace {

struct Cell {
  std::string example;
  double epsilon;
  Algorithm algorithm;
};

BenchRow run_cell(const Cell& cell, const BenchConfig& cfg) {
  BenchRow row;
  row.example = cell.example;
  row.epsilon = cell.epsilon;
  row.algorithm = cell.algorithm;
  const auto start = std::chrono::steady_clock::now();
  try {
    const DcProblem problem = registry_build_spec(cell.example);
    row.example = problem.name;
    row.n = problem.dim();
    row.m = problem.m;
    if (problem.known_optimum) row.z_star = problem.known_optimum->z_star;
    SolveConfig scfg;
    scfg.epsilon = cell.epsilon;
    scfg.time_limit = cfg.time_limit;
    scfg.max_iterations = cfg.max_iterations;
    const SolveReport report = solve_with(problem, cell.algorithm, scfg, cfg.max_cuts_per_iteration);
    row.value = report.f_best;
    row.lower_bound = report.lower_bound;
    row.certified = report.certified();
    row.status = std::string(to_string(report.terminated_by));
  } catch (const std::exception& e) {
    row.certified = false;
    row.status = std::string("failed: ") + e.what();
    spdlog::warn("bench cell {} eps={} {} failed: {}", cell.example, cell.epsilon, to_string(cell.algorithm),
                 e.what());
  }
  row.time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

auto row_key(const BenchRow& r) {
  return std::make_tuple(r.example, r.n, r.m.value_or(0), -r.epsilon, static_cast<int>(r.algorithm));
}

std::string fixed4(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

BenchSuite run_suite(std::span<const std::string> examples, std::span<const double> epsilons,
                     std::span<const Algorithm> algorithms, const BenchConfig& cfg) {
  std::vector<Cell> cells;
  for (const auto& ex : examples)
    for (double eps : epsilons)
      for (Algorithm alg : algorithms) cells.push_back({ex, eps, alg});

  BenchSuite suite;
  suite.config = cfg;
  suite.config.epsilons.assign(epsilons.begin(), epsilons.end());
  suite.rows.resize(cells.size());
  parallel_for(cells.size(), cfg.workers, [&](std::size_t i) { suite.rows[i] = run_cell(cells[i], cfg); });
  std::stable_sort(suite.rows.begin(), suite.rows.end(),
                   [](const BenchRow& a, const BenchRow& b) { return row_key(a) < row_key(b); });
  return suite;
}

BenchSuite run_suite(std::span<const std::string> examples, std::span<const double> epsilons,
                     std::span<const Algorithm> algorithms, double time_limit) {
  BenchConfig cfg;
  cfg.time_limit = time_limit;
  return run_suite(examples, epsilons, algorithms, cfg);
}

TableFormat table_format_from_string(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  if (text == "markdown") return TableFormat::markdown;
  throw InvalidInput("unknown format '" + std::string(text) + "' (expected csv, json or markdown)");
}

nlohmann::json to_json(const BenchSuite& suite) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : suite.rows) {
    nlohmann::json row{{"example", r.example},
                       {"n", r.n},
                       {"m", r.m ? nlohmann::json(*r.m) : nlohmann::json(nullptr)},
                       {"epsilon", r.epsilon},
                       {"algorithm", std::string(to_string(r.algorithm))},
                       {"time_seconds", r.time_seconds},
                       {"value", r.value},
                       {"lower_bound", r.lower_bound},
                       {"certified", r.certified},
                       {"z_star", r.z_star ? nlohmann::json(*r.z_star) : nlohmann::json(nullptr)},
                       {"status", r.status}};
    rows.push_back(std::move(row));
  }
  const auto& c = suite.config;
  return {{"config",
           {{"time_limit", c.time_limit},
            {"epsilons", c.epsilons},
            {"seed", c.seed},
            {"workers", c.workers},
            {"max_iterations", c.max_iterations},
            {"max_cuts_per_iteration", c.max_cuts_per_iteration}}},
          {"rows", std::move(rows)}};
}

BenchSuite suite_from_json(const nlohmann::json& doc) {
  BenchSuite suite;
  try {
    const auto& c = doc.at("config");
    suite.config.time_limit = c.at("time_limit").get<double>();
    suite.config.epsilons = c.at("epsilons").get<std::vector<double>>();
    suite.config.seed = c.at("seed").get<std::uint64_t>();
    suite.config.workers = c.at("workers").get<std::size_t>();
    suite.config.max_iterations = c.at("max_iterations").get<std::size_t>();
    suite.config.max_cuts_per_iteration = c.at("max_cuts_per_iteration").get<std::size_t>();
    for (const auto& r : doc.at("rows")) {
      BenchRow row;
      row.example = r.at("example").get<std::string>();
      row.n = r.at("n").get<std::size_t>();
      if (!r.at("m").is_null()) row.m = r.at("m").get<int>();
      row.epsilon = r.at("epsilon").get<double>();
      row.algorithm = algorithm_from_string(r.at("algorithm").get<std::string>());
      row.time_seconds = r.at("time_seconds").get<double>();
      row.value = r.at("value").get<double>();
      row.lower_bound = r.at("lower_bound").get<double>();
      row.certified = r.at("certified").get<bool>();
      if (!r.at("z_star").is_null()) row.z_star = r.at("z_star").get<double>();
      row.status = r.at("status").get<std::string>();
      suite.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed bench suite document: ") + e.what());
  }
  return suite;
}

std::string emit_table(const BenchSuite& suite, TableFormat format) {
  if (format == TableFormat::json) return to_json(suite).dump(2) + "\n";

  if (format == TableFormat::csv) {
    std::string out = "example,n,m,epsilon,algorithm,time_seconds,value,lower_bound,certified\n";
    for (const auto& r : suite.rows) {
      out += fmt::format("\"{}\",{},{},{},{},{},{},{},{}\n", r.example, r.n, r.m ? std::to_string(*r.m) : "",
                         format_double(r.epsilon), to_string(r.algorithm), format_double(r.time_seconds),
                         format_double(r.value), format_double(r.lower_bound), r.certified ? "true" : "false");
    }
    return out;
  }

  // Markdown: group by (example, epsilon), columns per algorithm.
  std::vector<std::tuple<std::string, double>> order;
  std::map<std::tuple<std::string, double>, std::map<Algorithm, const BenchRow*>> grid;
  for (const auto& r : suite.rows) {
    auto key = std::make_tuple(r.example, r.epsilon);
    if (!grid.contains(key)) order.push_back(key);
    grid[key][r.algorithm] = &r;
  }
  std::string out =
      "| Ex | n | z* | eps | Alg 1 time | Alg 1 value | Alg 2 time | Alg 2 value | Alg 3 time | Alg 3 value |\n"
      "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& key : order) {
    const auto& cells = grid[key];
    const BenchRow& any = *cells.begin()->second;
    std::string label = any.example.substr(0, any.example.find(':'));
    if (label.starts_with("ex")) label = label.substr(2);
    if (any.m) label += fmt::format(" (m={})", *any.m);
    out += fmt::format("| {} | {} | {} | {} |", label, any.n, any.z_star ? fmt::format("{:.6g}", *any.z_star) : "",
                       format_double(std::get<1>(key)));
    for (Algorithm alg : {Algorithm::alg1, Algorithm::alg2, Algorithm::alg3}) {
      const auto it = cells.find(alg);
      if (it == cells.end() || it->second->failed()) {
        out += " - | - |";
        continue;
      }
      const BenchRow& r = *it->second;
      const std::string time = r.status == "time_limit" ? fmt::format("> {}", format_double(suite.config.time_limit))
                                                        : fixed4(r.time_seconds);
      out += fmt::format(" {} | {} |", time, fixed4(r.value));
    }
    out += "\n";
  }
  return out;
}

ConvergenceStudy convergence_study(const ConvexOracle& g, const Box& box, Algorithm algorithm,
                                   std::size_t iterations) {
  if (algorithm == Algorithm::alg3) throw InvalidInput("convergence study runs alg1 or alg2");
  ApproxConfig cfg;
  cfg.epsilon = 0.0;
  cfg.max_iterations = iterations;
  cfg.record_history = true;
  ApproxResult result =
      algorithm == Algorithm::alg1 ? approximate_single_cut(g, box, cfg) : approximate_multi_cut(g, box, cfg);
  ConvergenceProfile profile = convergence_profile(result);
  std::string csv = "k,max_gap\n";
  for (std::size_t i = 0; i < profile.ks.size(); ++i)
    csv += fmt::format("{},{}\n", profile.ks[i], format_double(profile.gaps[i]));
  return ConvergenceStudy{std::move(csv), std::move(profile), std::move(result)};
}

ConvergenceStudy convergence_study(const std::string& example, Algorithm algorithm, std::size_t iterations) {
  const DcProblem problem = registry_build_spec(example);
  return convergence_study(problem.g, problem.box, algorithm, iterations);
}

}  // namespace dcpoly
