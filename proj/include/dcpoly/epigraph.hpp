#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dcpoly/affine.hpp"
#include "dcpoly/box.hpp"

namespace dcpoly {

/// Constraint numbering inside an EpigraphPoly with n variables and m cuts:
///   2j     lower facet x_j >= lower_j
///   2j + 1 upper facet x_j <= upper_j
///   2n + i minorant i, t >= s_i(x)
using ConstraintId = std::uint32_t;

struct LiftedVertex {
  Vector point;
  double height = 0.0;
  std::vector<ConstraintId> active_set;  // sorted, all constraints tight here
  std::uint64_t id = 0;                  // stable while the vertex survives cuts
};

struct IntersectStats {
  std::size_t removed = 0;
  std::size_t on_plane = 0;
  std::size_t created = 0;
  std::size_t merged = 0;
  std::size_t rank_tests = 0;  // adjacency decided by the algebraic fallback
};

/// Vertex description of C = epi(max_i s_i) ∩ (box × R).
///
/// The recession cone is always cone{e_{n+1}}, so only vertices are stored.
/// Coordinates live in structure-of-arrays form so the SIMD kernels can scan
/// them directly. Cuts are added in place with add_cut(); the free functions
/// below give the value-semantics view.
class EpigraphPoly {
 public:
  /// Relative band for classifying a vertex against a new cut.
  static constexpr double kClassifyTol = 1e-9;
  /// Vertices closer than this (Euclidean, in R^{n+1}) are merged.
  static constexpr double kMergeTol = 1e-8;

  /// C^0: the 2^n box corners lifted onto first_cut.
  EpigraphPoly(Box box, AffineMinorant first_cut);

  const Box& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  const std::vector<AffineMinorant>& minorants() const noexcept { return minorants_; }

  std::size_t vertex_count() const noexcept { return heights_.size(); }
  LiftedVertex vertex(std::size_t i) const;
  std::vector<LiftedVertex> vertices() const;

  double coord(std::size_t i, std::size_t j) const { return cols_[j][i]; }
  Vector point(std::size_t i) const;
  double height(std::size_t i) const { return heights_[i]; }
  std::uint64_t vertex_id(std::size_t i) const { return ids_[i]; }
  std::span<const ConstraintId> active_set(std::size_t i) const { return active_[i]; }
  std::span<const double> heights() const noexcept { return heights_; }

  /// Intersects with {t >= cut(x)}. Vertices strictly below the cut are
  /// dropped, vertices on it gain the new constraint, and new vertices appear
  /// on edges (and vertical rays) that cross the cut plane.
  IntersectStats add_cut(const AffineMinorant& cut);

  /// Current underestimator g^k(x) = max_i s_i(x).
  double underestimate(std::span<const double> x) const;

  std::size_t constraint_count() const noexcept { return 2 * dim() + minorants_.size(); }
  /// Row (normal, rhs) of constraint `id` written as normal^T (x, t) >= rhs.
  Vector constraint_normal(ConstraintId id) const;
  double constraint_rhs(ConstraintId id) const;
  /// normal^T (x, t) - rhs; nonnegative when the constraint holds.
  double constraint_slack(ConstraintId id, std::span<const double> x, double t) const;

 private:
  bool adjacent(std::span<const ConstraintId> common, std::size_t p_size, std::size_t q_size,
                IntersectStats& stats) const;
  std::size_t rank_of(std::span<const ConstraintId> ids) const;
  void push_minorant(const AffineMinorant& cut);

  Box box_;
  std::vector<AffineMinorant> minorants_;
  std::vector<std::vector<double>> cut_cols_;  // SoA gradients of minorants
  std::vector<double> cut_offsets_;

  std::vector<std::vector<double>> cols_;  // cols_[j][i]: coordinate j of vertex i
  std::vector<double> heights_;
  std::vector<std::vector<ConstraintId>> active_;
  std::vector<std::uint64_t> ids_;
  std::uint64_t next_id_ = 0;
};

EpigraphPoly init_epigraph(const Box& box, const AffineMinorant& first_cut);
EpigraphPoly intersect_halfspace(EpigraphPoly poly, const AffineMinorant& cut);

/// Test oracle: tries every (n+1)-subset of {box facets} ∪ {minorants},
/// keeps feasible nonsingular solutions and merges duplicates. Exponential;
/// meant for n <= 3 and a dozen constraints.
std::vector<LiftedVertex> enumerate_vertices_bruteforce(const Box& box,
                                                        std::span<const AffineMinorant> minorants);

/// Max of f over the 2^n corners (= sup over the box for convex f). n <= 20.
double max_over_box_vertices(const Box& box, const std::function<double(std::span<const double>)>& f);

}  // namespace dcpoly
