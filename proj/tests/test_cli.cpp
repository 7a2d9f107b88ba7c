#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <dcpoly/cli.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dcpoly::parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dcpoly_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("solve ex4") {
  const Run r = run({"solve", "--problem", "ex4", "--eps", "0.01", "--alg", "alg3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("f_best=-9.000000\n") != std::string::npos);
  CHECK(r.out.find("terminated_by=gap_met") != std::string::npos);
  // the algorithm defaults to alg3
  CHECK(run({"solve", "--problem", "ex4", "--eps", "0.01"}).out.find("algorithm=alg3") != std::string::npos);
}

TEST_CASE("unknown problem is a usage error") {
  const Run r = run({"solve", "--problem", "ex9", "--eps", "0.1"});
  CHECK(r.code == 1);
  for (const char* id : {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "ex8"}) CHECK(r.err.find(id) != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"solve", "--bogus"}).code == 1);
  CHECK(run({"solve", "--eps", "-1"}).code == 1);
  CHECK(run({"solve", "--eps", "abc"}).code == 1);
  CHECK(run({"solve", "--alg", "alg7"}).code == 1);
  CHECK(run({"solve", "--time-limit", "0"}).code == 1);
  CHECK(run({"approx", "--alg", "alg3"}).code == 1);
  CHECK(run({"bench", "--problem", "ex4", "--format", "xml"}).code == 1);
  CHECK(run({"solve", "--problem", "ex4", "--out", "/nonexistent-dir/x.json"}).code == 1);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("approx") != std::string::npos);
}

TEST_CASE("approx writes the polyhedron") {
  const fs::path out = scratch("poly.json");
  const Run r = run({"approx", "--problem", "ex5", "--eps", "0.1", "--alg", "alg2", "--out", out.string()});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["n"] == 2);
  CHECK(doc["box"]["lower"] == std::vector<double>{-6.0, -5.0});
  CHECK(doc["vertices"].size() > 4);
  CHECK(doc["minorants"].size() >= 1);
  const auto pos = r.out.find("final_gap=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 10)) <= 0.1);
}

TEST_CASE("uncertified runs exit with 2") {
  CHECK(run({"solve", "--problem", "ex2", "--eps", "1e-9", "--max-iter", "3"}).code == 2);
  CHECK(run({"approx", "--problem", "ex3", "--eps", "1e-9", "--alg", "alg1", "--max-iter", "3"}).code == 2);
  CHECK(run({"bench", "--problem", "ex2", "--eps", "1e-9", "--alg", "alg3", "--max-iter", "3"}).code == 2);
  CHECK(run({"bench", "--problem", "ex9"}).code == 1);
}

TEST_CASE("bench prints a markdown table by default") {
  const Run r = run({"bench", "--problem", "ex4", "--eps", "1", "--eps", "0.1", "--alg", "alg1", "--alg", "alg3"});
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("| Ex | n | z* | eps |"));
  CHECK(r.out.find("| 4 | 2 | -9 | 0.1 |") != std::string::npos);
}

TEST_CASE("convergence subcommand") {
  const fs::path out = scratch("conv.csv");
  const Run r = run({"convergence", "--problem", "ex5", "--max-iter", "100", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("cummin_slope=") != std::string::npos);
  CHECK(slurp(out).starts_with("k,max_gap\n"));
}

TEST_CASE("artifacts are byte-identical across runs") {
  const std::vector<std::vector<std::string>> invocations{
      {"approx", "--problem", "ex3", "--eps", "0.1", "--alg", "alg2", "--format", "json"},
      {"approx", "--problem", "ex3", "--eps", "0.1", "--alg", "alg1", "--format", "csv"},
      {"solve", "--problem", "ex5", "--eps", "0.01", "--format", "json"},
      {"solve", "--problem", "ex1", "--eps", "0.01", "--format", "csv"},
      {"bench", "--problem", "ex4", "--problem", "ex5", "--eps", "0.1", "--format", "json"},
      {"bench", "--problem", "ex4", "--eps", "0.1", "--format", "csv"},
  };
  int i = 0;
  for (auto args : invocations) {
    CAPTURE(args[0]);
    args.insert(args.end(), {"--seed", "7", "--workers", "1", "--no-timing"});
    const fs::path a = scratch("a" + std::to_string(i)), b = scratch("b" + std::to_string(i));
    ++i;
    auto with_out = [&](const fs::path& p) {
      auto v = args;
      v.insert(v.end(), {"--out", p.string()});
      return v;
    };
    const Run ra = run(with_out(a));
    const Run rb = run(with_out(b));
    CHECK(ra.code == 0);
    CHECK(ra.out == rb.out);
    CHECK_FALSE(slurp(a).empty());
    CHECK(slurp(a) == slurp(b));
  }
}
