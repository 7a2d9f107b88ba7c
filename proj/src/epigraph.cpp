#include "dcpoly/epigraph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "dcpoly/error.hpp"
#include "dcpoly/kernels.hpp"

namespace dcpoly {
namespace {

constexpr std::size_t kMaxCornerDim = 20;

std::vector<ConstraintId> intersect_sorted(std::span<const ConstraintId> a,
                                           std::span<const ConstraintId> b) {
  std::vector<ConstraintId> out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<ConstraintId> union_sorted(std::span<const ConstraintId> a,
                                       std::span<const ConstraintId> b) {
  std::vector<ConstraintId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

double band(double t) { return EpigraphPoly::kClassifyTol * (1.0 + std::abs(t)); }

double lifted_distance(std::span<const double> x, double t, std::span<const double> y, double s) {
  double d2 = (t - s) * (t - s);
  for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - y[j]) * (x[j] - y[j]);
  return std::sqrt(d2);
}

// Hash grid over lifted points for the merge step. Cells are 2*tol wide, so a
// tol-ball touches at most two cells per axis.
class MergeGrid {
 public:
  explicit MergeGrid(double tol) : tol_(tol), cell_(2 * tol) {}

  void insert(std::span<const double> x, double t, std::size_t tag) {
    key_.clear();
    for (double v : x) key_.push_back(static_cast<std::int64_t>(std::floor(v / cell_)));
    key_.push_back(static_cast<std::int64_t>(std::floor(t / cell_)));
    cells_[key_].push_back(Entry{Vector(x.begin(), x.end()), t, tag});
  }

  /// Smallest tag among stored points within tol of (x, t), or npos.
  std::size_t nearest_tag(std::span<const double> x, double t) {
    const std::size_t d = x.size() + 1;
    auto coord = [&](std::size_t j) { return j < x.size() ? x[j] : t; };
    std::vector<std::int64_t> lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = static_cast<std::int64_t>(std::floor((coord(j) - tol_) / cell_));
      hi[j] = static_cast<std::int64_t>(std::floor((coord(j) + tol_) / cell_));
    }
    std::size_t best = npos;
    key_ = lo;
    while (true) {
      if (const auto it = cells_.find(key_); it != cells_.end())
        for (const Entry& e : it->second)
          if (e.tag < best && lifted_distance(x, t, e.point, e.height) < tol_) best = e.tag;
      std::size_t j = 0;
      while (j < d && key_[j] == hi[j]) key_[j] = lo[j], ++j;
      if (j == d) break;
      ++key_[j];
    }
    return best;
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  struct Entry {
    Vector point;
    double height;
    std::size_t tag;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
      return h;
    }
  };
  double tol_;
  double cell_;
  std::vector<std::int64_t> key_;
  std::unordered_map<std::vector<std::int64_t>, std::vector<Entry>, KeyHash> cells_;
};

std::size_t normalized_rank(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) return 0;
  Eigen::MatrixXd m = rows;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (norm > 0) m.row(r) /= norm;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(lu.rank());
}

void check_cut(const Box& box, const AffineMinorant& cut) {
  if (cut.dim() != box.dim() || cut.anchor.size() != box.dim())
    throw InvalidInput("cut dimension " + std::to_string(cut.dim()) + " does not match box dimension " +
                       std::to_string(box.dim()));
}

// One Gauss-Newton step onto the active constraints. Edge interpolation
// loses a few ulps per cut; without this the error compounds over thousands
// of cuts. The step is dropped if it is not tiny or does not help.
void polish(const EpigraphPoly& poly, const AffineMinorant& cut, ConstraintId new_id,
            std::span<const ConstraintId> active, Vector& x, double& t) {
  const std::size_t n = x.size();
  const auto rows = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(n + 1));
  Eigen::VectorXd r(rows);
  auto slack = [&](ConstraintId id, std::span<const double> px, double pt) {
    return id == new_id ? pt - cut.evaluate(px) : poly.constraint_slack(id, px, pt);
  };
  for (Eigen::Index i = 0; i < rows; ++i) {
    const ConstraintId id = active[static_cast<std::size_t>(i)];
    if (id == new_id) {
      for (std::size_t j = 0; j < n; ++j) a(i, static_cast<Eigen::Index>(j)) = -cut.gradient[j];
      a(i, static_cast<Eigen::Index>(n)) = 1.0;
    } else {
      const Vector row = poly.constraint_normal(id);
      for (std::size_t j = 0; j <= n; ++j) a(i, static_cast<Eigen::Index>(j)) = row[j];
    }
    r(i) = slack(id, x, t);
  }
  const double before = r.cwiseAbs().maxCoeff();
  if (before <= 1e-15 * (1.0 + std::abs(t))) return;
  const Eigen::VectorXd step = a.colPivHouseholderQr().solve(-r);
  if (!step.allFinite() || step.norm() > 1e-6 * (1.0 + std::abs(t))) return;
  Vector nx(n);
  for (std::size_t j = 0; j < n; ++j) nx[j] = x[j] + step(static_cast<Eigen::Index>(j));
  const double nt = t + step(static_cast<Eigen::Index>(n));
  double after = 0.0;
  for (ConstraintId id : active) after = std::max(after, std::abs(slack(id, nx, nt)));
  if (after < before) {
    x = std::move(nx);
    t = nt;
  }
}

struct Candidate {
  Vector point;
  double height;
  std::vector<ConstraintId> active;
};

}  // namespace

EpigraphPoly::EpigraphPoly(Box box, AffineMinorant first_cut) : box_(std::move(box)) {
  check_cut(box_, first_cut);
  const std::size_t n = dim();
  if (n > kMaxCornerDim) throw InvalidInput("epigraph engine supports n <= 20");
  cut_cols_.assign(n, {});
  cols_.assign(n, {});
  push_minorant(first_cut);

  const std::size_t corners = box_.corner_count();
  heights_.reserve(corners);
  active_.reserve(corners);
  for (std::size_t mask = 0; mask < corners; ++mask) {
    const Vector c = box_.corner(mask);
    std::vector<ConstraintId> act;
    act.reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j)
      act.push_back(static_cast<ConstraintId>(2 * j + ((mask >> j) & 1U)));
    act.push_back(static_cast<ConstraintId>(2 * n));
    for (std::size_t j = 0; j < n; ++j) cols_[j].push_back(c[j]);
    heights_.push_back(minorants_.front().evaluate(c));
    active_.push_back(std::move(act));
    ids_.push_back(next_id_++);
  }
}

void EpigraphPoly::push_minorant(const AffineMinorant& cut) {
  for (std::size_t j = 0; j < dim(); ++j) cut_cols_[j].push_back(cut.gradient[j]);
  cut_offsets_.push_back(cut.offset);
  minorants_.push_back(cut);
}

Vector EpigraphPoly::point(std::size_t i) const {
  Vector x(dim());
  for (std::size_t j = 0; j < dim(); ++j) x[j] = cols_[j][i];
  return x;
}

LiftedVertex EpigraphPoly::vertex(std::size_t i) const {
  return LiftedVertex{point(i), heights_[i], active_[i], ids_[i]};
}

std::vector<LiftedVertex> EpigraphPoly::vertices() const {
  std::vector<LiftedVertex> out;
  out.reserve(vertex_count());
  for (std::size_t i = 0; i < vertex_count(); ++i) out.push_back(vertex(i));
  return out;
}

double EpigraphPoly::underestimate(std::span<const double> x) const {
  std::vector<const double*> cols(dim());
  for (std::size_t j = 0; j < dim(); ++j) cols[j] = cut_cols_[j].data();
  return kernels::max_affine(cols.data(), dim(), cut_offsets_.data(), cut_offsets_.size(), x.data());
}

Vector EpigraphPoly::constraint_normal(ConstraintId id) const {
  const std::size_t n = dim();
  Vector row(n + 1, 0.0);
  if (id < 2 * n) {
    row[id / 2] = (id % 2 == 0) ? 1.0 : -1.0;
  } else {
    const auto& s = minorants_.at(id - 2 * n);
    for (std::size_t j = 0; j < n; ++j) row[j] = -s.gradient[j];
    row[n] = 1.0;
  }
  return row;
}

double EpigraphPoly::constraint_rhs(ConstraintId id) const {
  const std::size_t n = dim();
  if (id < 2 * n) return (id % 2 == 0) ? box_.lower()[id / 2] : -box_.upper()[id / 2];
  return minorants_.at(id - 2 * n).offset;
}

double EpigraphPoly::constraint_slack(ConstraintId id, std::span<const double> x, double t) const {
  const std::size_t n = dim();
  if (id < 2 * n) {
    const std::size_t j = id / 2;
    return (id % 2 == 0) ? x[j] - box_.lower()[j] : box_.upper()[j] - x[j];
  }
  return t - minorants_.at(id - 2 * n).evaluate(x);
}

std::size_t EpigraphPoly::rank_of(std::span<const ConstraintId> ids) const {
  const std::size_t n = dim();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(n + 1));
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const Vector normal = constraint_normal(ids[r]);
    for (std::size_t c = 0; c <= n; ++c) rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = normal[c];
  }
  return normalized_rank(rows);
}

bool EpigraphPoly::adjacent(std::span<const ConstraintId> common, std::size_t p_size,
                            std::size_t q_size, IntersectStats& stats) const {
  const std::size_t n = dim();
  if (common.size() < n) return false;
  // Two simple vertices: any n of their n+1 independent normals are independent.
  if (p_size == n + 1 && q_size == n + 1) return common.size() == n;
  ++stats.rank_tests;
  return rank_of(common) == n;
}

IntersectStats EpigraphPoly::add_cut(const AffineMinorant& cut) {
  check_cut(box_, cut);
  const std::size_t n = dim();
  const std::size_t count = vertex_count();
  const auto new_id = static_cast<ConstraintId>(constraint_count());
  IntersectStats stats;

  std::vector<const double*> col_ptrs(n);
  for (std::size_t j = 0; j < n; ++j) col_ptrs[j] = cols_[j].data();
  std::vector<double> residual(count);
  kernels::affine_residuals(col_ptrs.data(), n, heights_.data(), count, cut.gradient.data(),
                            cut.offset, residual.data());

  enum class Side : unsigned char { kept, on, cut };
  std::vector<Side> side(count);
  std::vector<std::size_t> cut_idx;
  for (std::size_t i = 0; i < count; ++i) {
    const double tol = band(heights_[i]);
    if (residual[i] > tol) {
      side[i] = Side::cut;
      cut_idx.push_back(i);
    } else if (residual[i] >= -tol) {
      side[i] = Side::on;
      ++stats.on_plane;
    } else {
      side[i] = Side::kept;
    }
  }

  if (cut_idx.empty()) {
    push_minorant(cut);
    for (std::size_t i = 0; i < count; ++i)
      if (side[i] == Side::on) active_[i].push_back(new_id);
    return stats;
  }

  // Inverted index over kept vertices, restricted to constraints that some cut
  // vertex is tight on; only those can be shared across a crossing edge.
  std::vector<char> relevant(new_id, 0);
  for (std::size_t q : cut_idx)
    for (ConstraintId c : active_[q]) relevant[c] = 1;
  std::vector<std::vector<std::uint32_t>> holders(new_id);
  for (std::size_t p = 0; p < count; ++p) {
    if (side[p] != Side::kept) continue;
    for (ConstraintId c : active_[p])
      if (relevant[c]) holders[c].push_back(static_cast<std::uint32_t>(p));
  }

  std::vector<Candidate> fresh;
  std::vector<char> seen(count, 0);
  std::vector<std::uint32_t> touched;
  std::vector<ConstraintId> by_size;
  for (std::size_t q : cut_idx) {
    // A neighbour shares n of q's constraints, so it holds at least one of
    // any |A_q| - n + 1 of them; scan the shortest holder lists only.
    by_size.assign(active_[q].begin(), active_[q].end());
    std::sort(by_size.begin(), by_size.end(), [&](ConstraintId a, ConstraintId b) {
      return holders[a].size() < holders[b].size();
    });
    by_size.resize(by_size.size() - n + 1);
    touched.clear();
    for (ConstraintId c : by_size)
      for (std::uint32_t p : holders[c])
        if (!seen[p]) {
          seen[p] = 1;
          touched.push_back(p);
        }
    std::sort(touched.begin(), touched.end());
    for (std::uint32_t p : touched) {
      seen[p] = 0;
      auto common = intersect_sorted(active_[p], active_[q]);
      if (common.size() < n) continue;
      if (!adjacent(common, active_[p].size(), active_[q].size(), stats)) continue;
      const double lambda = residual[p] / (residual[p] - residual[q]);
      Candidate cand;
      cand.point.resize(n);
      for (std::size_t j = 0; j < n; ++j)
        cand.point[j] = cols_[j][p] + lambda * (cols_[j][q] - cols_[j][p]);
      cand.height = heights_[p] + lambda * (heights_[q] - heights_[p]);
      common.push_back(new_id);
      cand.active = std::move(common);
      polish(*this, cut, new_id, cand.active, cand.point, cand.height);
      fresh.push_back(std::move(cand));
    }

    // The vertical ray above q is an edge exactly when q sits on a box corner.
    std::vector<ConstraintId> facets;
    for (ConstraintId c : active_[q])
      if (c < 2 * n) facets.push_back(c);
    if (facets.size() == n) {
      Candidate cand;
      cand.point = point(q);
      cand.height = heights_[q] + residual[q];
      facets.push_back(new_id);
      cand.active = std::move(facets);
      fresh.push_back(std::move(cand));
    }
  }

  // Merge coincident new vertices with each other and with on-plane vertices.
  std::vector<std::size_t> on_idx;
  for (std::size_t i = 0; i < count; ++i)
    if (side[i] == Side::on) {
      active_[i].push_back(new_id);
      on_idx.push_back(i);
    }
  // On-plane vertices take precedence, then earlier accepted candidates.
  MergeGrid grid(kMergeTol);
  for (std::size_t r = 0; r < on_idx.size(); ++r) grid.insert(point(on_idx[r]), heights_[on_idx[r]], r);
  const std::size_t accepted_base = on_idx.size();
  std::vector<Candidate> accepted;
  accepted.reserve(fresh.size());
  for (auto& cand : fresh) {
    const std::size_t tag = grid.nearest_tag(cand.point, cand.height);
    if (tag == MergeGrid::npos) {
      grid.insert(cand.point, cand.height, accepted_base + accepted.size());
      accepted.push_back(std::move(cand));
      continue;
    }
    ++stats.merged;
    if (tag < accepted_base) {
      auto& act = active_[on_idx[tag]];
      act = union_sorted(act, cand.active);
    } else {
      auto& acc = accepted[tag - accepted_base];
      acc.active = union_sorted(acc.active, cand.active);
    }
  }

  // Compact survivors in order, then append the new vertices.
  std::size_t w = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (side[i] == Side::cut) continue;
    if (w != i) {
      for (std::size_t j = 0; j < n; ++j) cols_[j][w] = cols_[j][i];
      heights_[w] = heights_[i];
      active_[w] = std::move(active_[i]);
      ids_[w] = ids_[i];
    }
    ++w;
  }
  for (std::size_t j = 0; j < n; ++j) cols_[j].resize(w);
  heights_.resize(w);
  active_.resize(w);
  ids_.resize(w);
  for (auto& cand : accepted) {
    for (std::size_t j = 0; j < n; ++j) cols_[j].push_back(cand.point[j]);
    heights_.push_back(cand.height);
    active_.push_back(std::move(cand.active));
    ids_.push_back(next_id_++);
  }
  push_minorant(cut);

  stats.removed = cut_idx.size();
  stats.created = accepted.size();
  if (vertex_count() == 0) throw InternalError("upward cut emptied the epigraph polyhedron");
  return stats;
}

EpigraphPoly init_epigraph(const Box& box, const AffineMinorant& first_cut) {
  return EpigraphPoly(box, first_cut);
}

EpigraphPoly intersect_halfspace(EpigraphPoly poly, const AffineMinorant& cut) {
  poly.add_cut(cut);
  return poly;
}

std::vector<LiftedVertex> enumerate_vertices_bruteforce(const Box& box,
                                                        std::span<const AffineMinorant> minorants) {
  if (minorants.empty()) throw InvalidInput("brute-force enumeration needs at least one minorant");
  for (const auto& s : minorants) check_cut(box, s);
  const std::size_t n = box.dim();
  const std::size_t total = 2 * n + minorants.size();
  const std::size_t k = n + 1;
  if (total < k) return {};

  auto normal = [&](std::size_t id) {
    Vector row(n + 1, 0.0);
    if (id < 2 * n) {
      row[id / 2] = (id % 2 == 0) ? 1.0 : -1.0;
    } else {
      const auto& s = minorants[id - 2 * n];
      for (std::size_t j = 0; j < n; ++j) row[j] = -s.gradient[j];
      row[n] = 1.0;
    }
    return row;
  };
  auto rhs = [&](std::size_t id) {
    if (id < 2 * n) return (id % 2 == 0) ? box.lower()[id / 2] : -box.upper()[id / 2];
    return minorants[id - 2 * n].offset;
  };
  auto slack = [&](std::size_t id, const Vector& x, double t) {
    const Vector row = normal(id);
    double v = row[n] * t;
    for (std::size_t j = 0; j < n; ++j) v += row[j] * x[j];
    return v - rhs(id);
  };

  std::vector<LiftedVertex> found;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  Eigen::VectorXd b(static_cast<Eigen::Index>(k));
  while (true) {
    for (std::size_t r = 0; r < k; ++r) {
      const Vector row = normal(pick[r]);
      for (std::size_t c = 0; c < k; ++c) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
      b(static_cast<Eigen::Index>(r)) = rhs(pick[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    if (static_cast<std::size_t>(lu.rank()) == k) {
      const Eigen::VectorXd z = lu.solve(b);
      Vector x(z.data(), z.data() + n);
      const double t = z(static_cast<Eigen::Index>(n));
      const double tol = 1e-9 * (1.0 + std::abs(t));
      bool feasible = true;
      std::vector<ConstraintId> active;
      for (std::size_t id = 0; id < total && feasible; ++id) {
        const double s = slack(id, x, t);
        if (s < -tol) feasible = false;
        else if (s <= tol) active.push_back(static_cast<ConstraintId>(id));
      }
      if (feasible) {
        bool dup = false;
        for (auto& v : found) {
          if (lifted_distance(v.point, v.height, x, t) < EpigraphPoly::kMergeTol) {
            v.active_set = union_sorted(v.active_set, active);
            dup = true;
            break;
          }
        }
        if (!dup) found.push_back(LiftedVertex{std::move(x), t, std::move(active), found.size()});
      }
    }
    // next k-combination of {0..total-1}
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == total - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(found.begin(), found.end(), [](const LiftedVertex& l, const LiftedVertex& r) {
    if (l.point != r.point) return l.point < r.point;
    return l.height < r.height;
  });
  for (std::size_t i = 0; i < found.size(); ++i) found[i].id = i;
  return found;
}

double max_over_box_vertices(const Box& box, const std::function<double(std::span<const double>)>& f) {
  if (box.dim() > kMaxCornerDim) throw InvalidInput("corner scan supports n <= 20");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < box.corner_count(); ++mask) {
    const Vector c = box.corner(mask);
    best = std::max(best, f(c));
  }
  return best;
}

}  // namespace dcpoly
