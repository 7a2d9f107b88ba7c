#include "dcpoly/io.hpp"

#include <fmt/format.h>

namespace dcpoly {

std::string format_double(double v) { return fmt::format("{}", v); }

nlohmann::json to_json(const EpigraphPoly& poly) {
  nlohmann::json doc;
  doc["n"] = poly.dim();
  doc["box"] = {{"lower", poly.box().lower()}, {"upper", poly.box().upper()}};
  auto& cuts = doc["minorants"] = nlohmann::json::array();
  for (const auto& s : poly.minorants())
    cuts.push_back({{"gradient", s.gradient}, {"offset", s.offset}, {"anchor", s.anchor}});
  auto& verts = doc["vertices"] = nlohmann::json::array();
  for (std::size_t i = 0; i < poly.vertex_count(); ++i)
    verts.push_back({{"point", poly.point(i)}, {"height", poly.height(i)}});
  return doc;
}

nlohmann::json to_json(const SolveReport& report) {
  nlohmann::json doc{
      {"problem", report.problem},
      {"n", report.n},
      {"epsilon", report.epsilon},
      {"algorithm", report.algorithm},
      {"x_best", report.x_best},
      {"f_best", report.f_best},
      {"lower_bound", report.lower_bound},
      {"upper_bound", report.upper_bound},
      {"iterations", report.iterations},
      {"cuts", report.cuts},
      {"elapsed_seconds", report.elapsed_seconds},
      {"terminated_by", std::string(to_string(report.terminated_by))},
  };
  if (report.bounds_history) {
    auto& rows = doc["bounds_history"] = nlohmann::json::array();
    for (const auto& b : *report.bounds_history) rows.push_back({{"k", b.k}, {"a_k", b.a_k}, {"b_k", b.b_k}});
  }
  return doc;
}

std::string history_csv(const std::vector<HistoryRecord>& history) {
  std::string out = "k,vertex_count,max_gap,cuts_so_far,elapsed_seconds\n";
  for (const auto& r : history)
    out += fmt::format("{},{},{},{},{}\n", r.k, r.vertex_count, r.max_gap, r.cuts_so_far, r.elapsed_seconds);
  return out;
}

std::string bounds_csv(const std::vector<BoundRecord>& bounds) {
  std::string out = "k,a_k,b_k\n";
  for (const auto& b : bounds) out += fmt::format("{},{},{}\n", b.k, b.a_k, b.b_k);
  return out;
}

}  // namespace dcpoly
