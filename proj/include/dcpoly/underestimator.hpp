#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dcpoly/epigraph.hpp"
#include "dcpoly/oracle.hpp"

namespace dcpoly {

enum class Termination { gap_met, iteration_cap, time_limit };

std::string_view to_string(Termination t) noexcept;
Termination termination_from_string(std::string_view text);

struct ApproxConfig {
  double epsilon = 0.1;
  std::size_t max_iterations = 100000;
  std::size_t max_cuts_per_iteration = 4096;  // multi-cut only
  double time_limit = 600.0;                  // seconds
  bool record_history = false;
  std::size_t workers = 1;

  /// epsilon >= 0, epsilon == 0 only with a finite iteration cap, caps >= 1.
  void validate() const;
};

struct HistoryRecord {
  std::size_t k = 0;
  std::size_t vertex_count = 0;
  double max_gap = 0.0;
  std::size_t cuts_so_far = 0;
  double elapsed_seconds = 0.0;
};

struct ApproxResult {
  EpigraphPoly poly;  // epi g^k ∩ (X × R)
  double epsilon = 0.0;
  std::size_t iterations = 0;
  std::size_t cuts_added = 0;  // not counting the initial cut at the center
  double final_gap = 0.0;
  std::vector<HistoryRecord> history;
  Termination terminated_by = Termination::gap_met;
  double elapsed_seconds = 0.0;

  const std::vector<AffineMinorant>& minorants() const noexcept { return poly.minorants(); }
};

/// One supporting cut per iteration at the vertex with the largest gap
/// g(x) - t, until that gap is at most epsilon.
ApproxResult approximate_single_cut(const ConvexOracle& g, const Box& box, const ApproxConfig& cfg);

/// Each pass cuts at every unchecked vertex whose gap exceeds epsilon (deepest
/// first, capped per pass) and caches the rest; stops when a pass adds no cut.
ApproxResult approximate_multi_cut(const ConvexOracle& g, const Box& box, const ApproxConfig& cfg);

struct VertexGap {
  double gap = 0.0;
  LiftedVertex argmax_vertex;
};

/// Largest g(point) - height over the vertices, ties to the lexicographically
/// smallest point. Equals sup over the box of g - g^k and bounds the Hausdorff
/// distance between the capped epigraphs from above.
VertexGap max_vertex_gap(const EpigraphPoly& poly, const ConvexOracle& g);

struct ConvergenceProfile {
  std::vector<std::size_t> ks;
  std::vector<double> gaps;
  std::vector<double> cummin_gaps;  // running minimum of gaps
  double loglog_slope = 0.0;         // fit of log gap vs log k, last half
  double cummin_slope = 0.0;         // same fit on cummin_gaps
  bool slope_defined = true;         // false when a gap in the window is 0
};

/// Needs a recorded history with >= 20 points, unless every gap is zero, in
/// which case the slopes are NaN and slope_defined is false.
ConvergenceProfile convergence_profile(const ApproxResult& result);

namespace detail {

/// Per-vertex oracle values kept aligned with an EpigraphPoly. Vertex ids are
/// strictly increasing in storage order, so a merge walk finds survivors.
class VertexValueCache {
 public:
  void sync(const EpigraphPoly& poly, const ConvexOracle& f, std::size_t workers);
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  std::vector<std::uint64_t> ids_;
  std::vector<double> values_;
  std::size_t evaluations_ = 0;
};

/// Lexicographic order on vertex points, then heights.
bool lex_less(const EpigraphPoly& poly, std::size_t a, std::size_t b);

}  // namespace detail

}  // namespace dcpoly
