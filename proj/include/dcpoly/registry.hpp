#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dcpoly/oracle.hpp"

namespace dcpoly {

/// Parsed form of "ex6:n=3,m=2".
struct ProblemSpec {
  std::string id;
  std::map<std::string, int> params;
};

ProblemSpec parse_problem_spec(std::string_view text);

/// Benchmark problems ex1..ex8 with their DC decompositions.
///
/// Valid combinations: ex1 (n=1); ex2..ex5 (n=2); ex6 (n in {2,3}, m in {2,3});
/// ex7 (n=4); ex8 (n in {2,3,4,5}). Omitted n/m take the first valid value.
/// Anything else throws InvalidInput with the list of valid combinations.
DcProblem registry_build(std::string_view example_id, std::optional<int> n = std::nullopt,
                         const std::map<std::string, int>& params = {});
DcProblem registry_build(const ProblemSpec& spec);
DcProblem registry_build_spec(std::string_view text);

std::string registry_valid_combinations();

/// Convex pieces shared by the registry and tests.
namespace pieces {
/// Index of the first entry within 1e-12 * (1 + |max|) of the maximum.
std::size_t first_active(std::span<const double> values);
/// sign(u) with the kink value 0 at u == 0.
double sign0(double u);
}  // namespace pieces

}  // namespace dcpoly
