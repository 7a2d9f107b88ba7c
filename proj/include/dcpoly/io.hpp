#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dcpoly/epigraph.hpp"
#include "dcpoly/solver.hpp"
#include "dcpoly/underestimator.hpp"

namespace dcpoly {

/// {n, box:{lower,upper}, minorants:[{gradient,offset,anchor}], vertices:[{point,height}]}
nlohmann::json to_json(const EpigraphPoly& poly);

/// {problem, n, epsilon, algorithm, x_best, f_best, lower_bound, upper_bound,
///  iterations, cuts, elapsed_seconds, terminated_by, bounds_history?}
nlohmann::json to_json(const SolveReport& report);

/// k,vertex_count,max_gap,cuts_so_far,elapsed_seconds
std::string history_csv(const std::vector<HistoryRecord>& history);

/// k,a_k,b_k
std::string bounds_csv(const std::vector<BoundRecord>& bounds);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace dcpoly
