#include "dcpoly/underestimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "dcpoly/error.hpp"
#include "dcpoly/parallel.hpp"

namespace dcpoly {

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::gap_met: return "gap_met";
    case Termination::iteration_cap: return "iteration_cap";
    case Termination::time_limit: return "time_limit";
  }
  return "unknown";
}

Termination termination_from_string(std::string_view text) {
  if (text == "gap_met") return Termination::gap_met;
  if (text == "iteration_cap") return Termination::iteration_cap;
  if (text == "time_limit") return Termination::time_limit;
  throw InvalidInput("unknown termination reason '" + std::string(text) + "'");
}

void ApproxConfig::validate() const {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be finite and >= 0");
  if (max_iterations == 0 && epsilon == 0) throw InvalidInput("epsilon = 0 needs a finite iteration cap");
  if (max_cuts_per_iteration == 0) throw InvalidInput("max_cuts_per_iteration must be >= 1");
  if (!(time_limit > 0)) throw InvalidInput("time limit must be positive");
}

namespace detail {

void VertexValueCache::sync(const EpigraphPoly& poly, const ConvexOracle& f, std::size_t workers) {
  const std::size_t count = poly.vertex_count();
  std::vector<std::uint64_t> ids(count);
  std::vector<double> values(count);
  std::vector<std::size_t> missing;
  std::size_t j = 0;
  for (std::size_t i = 0; i < count; ++i) {
    ids[i] = poly.vertex_id(i);
    while (j < ids_.size() && ids_[j] < ids[i]) ++j;
    if (j < ids_.size() && ids_[j] == ids[i]) {
      values[i] = values_[j];
    } else {
      missing.push_back(i);
    }
  }
  parallel_for(missing.size(), workers, [&](std::size_t k) {
    const std::size_t i = missing[k];
    values[i] = f.value(poly.point(i));
  });
  evaluations_ += missing.size();
  ids_ = std::move(ids);
  values_ = std::move(values);
}

bool lex_less(const EpigraphPoly& poly, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < poly.dim(); ++j) {
    const double xa = poly.coord(a, j);
    const double xb = poly.coord(b, j);
    if (xa != xb) return xa < xb;
  }
  return poly.height(a) < poly.height(b);
}

}  // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Largest gap, ties to the lexicographically smallest vertex.
std::pair<std::size_t, double> argmax_gap(const EpigraphPoly& poly, const detail::VertexValueCache& g) {
  std::size_t best = 0;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) {
    const double gap = g[i] - poly.height(i);
    if (gap > best_gap || (gap == best_gap && detail::lex_less(poly, i, best))) {
      best = i;
      best_gap = gap;
    }
  }
  return {best, best_gap};
}

template <class Fn>
auto with_iteration_context(std::size_t k, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError("iteration " + std::to_string(k) + ": " + e.what(), e.point());
  }
}

}  // namespace

ApproxResult approximate_single_cut(const ConvexOracle& g, const Box& box, const ApproxConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  EpigraphPoly poly(box, with_iteration_context(0, [&] { return supporting_cut(g, box.center()); }));
  detail::VertexValueCache gval;
  with_iteration_context(0, [&] { gval.sync(poly, g, cfg.workers); return 0; });

  std::vector<HistoryRecord> history;
  std::size_t k = 0;
  Termination why = Termination::gap_met;
  double gap = 0.0;
  while (true) {
    const auto [idx, worst] = argmax_gap(poly, gval);
    gap = worst;
    if (cfg.record_history)
      history.push_back({k, poly.vertex_count(), gap, k, seconds_since(start)});
    if (gap <= cfg.epsilon) break;
    if (k >= cfg.max_iterations) {
      why = Termination::iteration_cap;
      break;
    }
    if (seconds_since(start) >= cfg.time_limit) {
      why = Termination::time_limit;
      break;
    }
    const Vector x = poly.point(idx);
    ++k;
    with_iteration_context(k, [&] {
      poly.add_cut(supporting_cut(g, x));
      gval.sync(poly, g, cfg.workers);
      return 0;
    });
  }
  spdlog::debug("single-cut: {} after {} cuts, gap {:.3e}, {} vertices", to_string(why), k, gap,
                poly.vertex_count());
  return ApproxResult{std::move(poly), cfg.epsilon, k, k, gap, std::move(history), why, seconds_since(start)};
}

ApproxResult approximate_multi_cut(const ConvexOracle& g, const Box& box, const ApproxConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  EpigraphPoly poly(box, with_iteration_context(0, [&] { return supporting_cut(g, box.center()); }));
  detail::VertexValueCache gval;
  with_iteration_context(0, [&] { gval.sync(poly, g, cfg.workers); return 0; });

  std::unordered_set<std::uint64_t> settled;  // vertices already within epsilon
  std::vector<HistoryRecord> history;
  std::size_t k = 0;
  std::size_t cuts = 0;
  Termination why = Termination::gap_met;
  double max_gap = 0.0;
  while (true) {
    std::vector<std::size_t> deep;
    max_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.vertex_count(); ++i) {
      const double gap = gval[i] - poly.height(i);
      max_gap = std::max(max_gap, gap);
      if (settled.contains(poly.vertex_id(i))) continue;
      if (gap > cfg.epsilon) {
        deep.push_back(i);
      } else {
        settled.insert(poly.vertex_id(i));
      }
    }
    if (cfg.record_history)
      history.push_back({k, poly.vertex_count(), max_gap, cuts, seconds_since(start)});
    if (deep.empty()) break;
    if (k >= cfg.max_iterations) {
      why = Termination::iteration_cap;
      break;
    }
    if (seconds_since(start) >= cfg.time_limit) {
      why = Termination::time_limit;
      break;
    }
    std::sort(deep.begin(), deep.end(), [&](std::size_t a, std::size_t b) {
      const double ga = gval[a] - poly.height(a);
      const double gb = gval[b] - poly.height(b);
      if (ga != gb) return ga > gb;
      return detail::lex_less(poly, a, b);
    });
    if (deep.size() > cfg.max_cuts_per_iteration) deep.resize(cfg.max_cuts_per_iteration);

    ++k;
    // All cuts come from C^k; intersecting them one by one yields C^k ∩ R.
    std::vector<std::optional<AffineMinorant>> batch(deep.size());
    with_iteration_context(k, [&] {
      parallel_for(deep.size(), cfg.workers, [&](std::size_t c) {
        const std::size_t i = deep[c];
        const double value = gval[i];
        Vector x = poly.point(i);
        Vector grad = g.subgradient(x);
        batch[c] = AffineMinorant::from_anchor(std::move(x), value, std::move(grad));
      });
      for (auto& cut : batch) poly.add_cut(*cut);
      gval.sync(poly, g, cfg.workers);
      return 0;
    });
    cuts += batch.size();
  }
  spdlog::debug("multi-cut: {} after {} passes / {} cuts, gap {:.3e}, {} vertices", to_string(why), k, cuts,
                max_gap, poly.vertex_count());
  return ApproxResult{std::move(poly), cfg.epsilon, k, cuts, max_gap, std::move(history), why, seconds_since(start)};
}

VertexGap max_vertex_gap(const EpigraphPoly& poly, const ConvexOracle& g) {
  if (poly.vertex_count() == 0) throw InvalidInput("polyhedron has no vertices");
  detail::VertexValueCache gval;
  gval.sync(poly, g, 1);
  const auto [idx, gap] = argmax_gap(poly, gval);
  return VertexGap{gap, poly.vertex(idx)};
}

namespace {

double fit_loglog(std::span<const std::size_t> ks, std::span<const double> gaps, bool& defined) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] == 0) continue;
    if (!(gaps[i] > 0)) {
      defined = false;
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double lx = std::log(static_cast<double>(ks[i]));
    const double ly = std::log(gaps[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  if (count < 2 || denom <= 0) {
    defined = false;
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (static_cast<double>(count) * sxy - sx * sy) / denom;
}

}  // namespace

ConvergenceProfile convergence_profile(const ApproxResult& result) {
  const auto& hist = result.history;
  if (hist.empty()) throw InvalidInput("convergence profile needs a recorded history");
  ConvergenceProfile profile;
  double running = std::numeric_limits<double>::infinity();
  bool all_zero = true;
  for (const auto& rec : hist) {
    profile.ks.push_back(rec.k);
    profile.gaps.push_back(rec.max_gap);
    running = std::min(running, rec.max_gap);
    profile.cummin_gaps.push_back(running);
    if (rec.max_gap != 0.0) all_zero = false;
  }
  if (all_zero) {
    profile.slope_defined = false;
    profile.loglog_slope = profile.cummin_slope = std::numeric_limits<double>::quiet_NaN();
    return profile;
  }
  if (hist.size() < 20)
    throw InvalidInput("convergence profile needs >= 20 history points, got " + std::to_string(hist.size()));
  const std::size_t half = hist.size() / 2;
  const std::span<const std::size_t> ks(profile.ks.begin() + static_cast<std::ptrdiff_t>(half), profile.ks.end());
  const std::span<const double> raw(profile.gaps.begin() + static_cast<std::ptrdiff_t>(half), profile.gaps.end());
  const std::span<const double> env(profile.cummin_gaps.begin() + static_cast<std::ptrdiff_t>(half),
                                    profile.cummin_gaps.end());
  profile.loglog_slope = fit_loglog(ks, raw, profile.slope_defined);
  profile.cummin_slope = fit_loglog(ks, env, profile.slope_defined);
  return profile;
}

}  // namespace dcpoly
