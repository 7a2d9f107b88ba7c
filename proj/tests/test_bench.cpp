#include <doctest.h>

#include <cmath>
#include <sstream>

#include <dcpoly/bench.hpp>
#include <dcpoly/error.hpp>

#include "support.hpp"

using namespace dcpoly;

namespace {

const std::vector<Algorithm> kAll{Algorithm::alg1, Algorithm::alg2, Algorithm::alg3};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("ex4 suite") {
  const std::vector<std::string> ex{"ex4"};
  const std::vector<double> eps{1.0, 0.1, 0.01};
  const BenchSuite suite = run_suite(ex, eps, kAll, 600.0);
  REQUIRE(suite.rows.size() == 9);
  for (const auto& r : suite.rows) {
    CHECK(r.certified);
    CHECK(r.status == "gap_met");
    CHECK(r.value >= -9.0);
    CHECK(r.value <= -9.0 + r.epsilon);
    CHECK(r.z_star == -9.0);
  }
  // sorted by epsilon descending, then algorithm
  CHECK(suite.rows.front().epsilon == 1.0);
  CHECK(suite.rows.front().algorithm == Algorithm::alg1);
  CHECK(suite.rows.back().epsilon == 0.01);
  CHECK(suite.rows.back().algorithm == Algorithm::alg3);

  SUBCASE("markdown") {
    const std::string md = emit_table(suite, TableFormat::markdown);
    CHECK(count_lines(md) == 2 + 3);
    CHECK(md.find("| 4 | 2 | -9 | 1 |") != std::string::npos);
    CHECK(md.find("-9.0000") != std::string::npos);
    CHECK(md.find("Alg 3 value") != std::string::npos);
  }
  SUBCASE("csv") {
    const std::string csv = emit_table(suite, TableFormat::csv);
    CHECK(csv.starts_with("example,n,m,epsilon,algorithm,time_seconds,value,lower_bound,certified\n"));
    CHECK(count_lines(csv) == 10);
  }
  SUBCASE("json round trip") {
    const BenchSuite back = suite_from_json(nlohmann::json::parse(emit_table(suite, TableFormat::json)));
    REQUIRE(back.rows.size() == suite.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
      CHECK(back.rows[i].example == suite.rows[i].example);
      CHECK(back.rows[i].value == suite.rows[i].value);
      CHECK(back.rows[i].lower_bound == suite.rows[i].lower_bound);
      CHECK(back.rows[i].algorithm == suite.rows[i].algorithm);
      CHECK(back.rows[i].certified == suite.rows[i].certified);
      CHECK(back.rows[i].z_star == suite.rows[i].z_star);
      CHECK(back.rows[i].m == suite.rows[i].m);
    }
    CHECK(back.config.epsilons == eps);
    CHECK(to_json(back) == to_json(suite));
  }
}

TEST_CASE("ex8 n=2 under alg3") {
  const std::vector<std::string> ex{"ex8:n=2"};
  const std::vector<double> eps{1.0};
  const std::vector<Algorithm> alg{Algorithm::alg3};
  const BenchSuite suite = run_suite(ex, eps, alg, 600.0);
  REQUIRE(suite.rows.size() == 1);
  CHECK(suite.rows[0].certified);
  CHECK(std::abs(suite.rows[0].value) <= 1e-9);
  CHECK(suite.rows[0].n == 2);
}

TEST_CASE("empty suite") {
  const BenchSuite suite = run_suite({}, std::vector<double>{0.1}, kAll, 600.0);
  CHECK(suite.rows.empty());
  CHECK(count_lines(emit_table(suite, TableFormat::csv)) == 1);
  CHECK(count_lines(emit_table(suite, TableFormat::markdown)) == 2);
}

TEST_CASE("one-row csv") {
  const BenchSuite suite =
      run_suite(std::vector<std::string>{"ex5"}, std::vector<double>{1.0}, std::vector{Algorithm::alg3}, 600.0);
  CHECK(count_lines(emit_table(suite, TableFormat::csv)) == 2);
}

TEST_CASE("failed and capped cells") {
  BenchConfig cfg;
  cfg.max_iterations = 2;
  const BenchSuite suite = run_suite(std::vector<std::string>{"ex2", "ex9"}, std::vector<double>{1e-6},
                                     std::vector{Algorithm::alg1, Algorithm::alg3}, cfg);
  REQUIRE(suite.rows.size() == 4);
  std::size_t failed = 0;
  for (const auto& r : suite.rows) {
    CHECK_FALSE(r.certified);
    if (r.failed()) ++failed;
    else CHECK(r.status == "iteration_cap");
  }
  CHECK(failed == 2);
  const std::string md = emit_table(suite, TableFormat::markdown);
  CHECK(md.find(" - | - |") != std::string::npos);
}

TEST_CASE("time-limited rows print the limit") {
  BenchConfig cfg;
  cfg.time_limit = 1e-9;
  const BenchSuite suite =
      run_suite(std::vector<std::string>{"ex2"}, std::vector<double>{1e-3}, std::vector{Algorithm::alg3}, cfg);
  REQUIRE(suite.rows.size() == 1);
  CHECK(suite.rows[0].status == "time_limit");
  CHECK_FALSE(suite.rows[0].certified);
  CHECK(emit_table(suite, TableFormat::markdown).find("> 1e-09") != std::string::npos);
}

TEST_CASE("suites are reproducible with one worker") {
  const std::vector<std::string> ex{"ex5", "ex6:n=2,m=3"};
  const std::vector<double> eps{0.1};
  const BenchSuite a = run_suite(ex, eps, kAll, 600.0);
  const BenchSuite b = run_suite(ex, eps, kAll, 600.0);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].value == b.rows[i].value);
    CHECK(a.rows[i].lower_bound == b.rows[i].lower_bound);
  }
  BenchConfig par;
  par.workers = 3;
  const BenchSuite c = run_suite(ex, eps, kAll, par);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value == c.rows[i].value);
}

TEST_CASE("convergence studies") {
  SUBCASE("ex5, alg1, 300 iterations") {
    const auto s = convergence_study("ex5", Algorithm::alg1, 300);
    CHECK(s.profile.gaps.size() == 301);
    for (double g : s.profile.gaps) CHECK(g > 0);
    CHECK(s.profile.gaps.back() < s.profile.gaps.front());
    CHECK(s.profile.slope_defined);
    CHECK(s.csv.starts_with("k,max_gap\n"));
    CHECK(count_lines(s.csv) == 302);
  }
  SUBCASE("affine g") {
    const auto s = convergence_study(testing::affine_oracle({2.0}, 1.0), Box({0.0}, {1.0}), Algorithm::alg1, 30);
    for (double g : s.profile.gaps) CHECK(std::abs(g) <= 1e-12);
  }
  SUBCASE("ex2, cumulative minimum never increases") {
    const auto s = convergence_study("ex2", Algorithm::alg1, 200);
    for (std::size_t i = 1; i < s.profile.cummin_gaps.size(); ++i)
      CHECK(s.profile.cummin_gaps[i] <= s.profile.cummin_gaps[i - 1]);
  }
  CHECK_THROWS_AS(convergence_study("ex5", Algorithm::alg3, 30), InvalidInput);
}

TEST_CASE("table format names") {
  CHECK(table_format_from_string("csv") == TableFormat::csv);
  CHECK(table_format_from_string("markdown") == TableFormat::markdown);
  CHECK_THROWS_AS(table_format_from_string("xml"), InvalidInput);
  CHECK_THROWS_AS(suite_from_json(nlohmann::json::parse("{\"rows\": 3}")), InvalidInput);
}
