#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fuplab/interval_set.hpp"

namespace fuplab {

// Level-indexed kept-interval tree rooted at [0,1]. Level k consists of
// the cells [m L^-k, (m+1) L^-k] for the kept indices m; every kept node
// drops exactly one of its L children, so level k holds (L-1)^k cells.
// Removal choices are explicit for levels 0..min(k0, depth-1) (where the
// dropped child must avoid the embedded set); below the cutoff k0 the
// dropped child is always the leftmost one, kept implicitly.
class CantorTree {
 public:
  // Builds the tree for a porous set: L = ceil(2/nu), the cutoff k0 is
  // the unique integer with L^(-1-k0) < alpha0 <= L^-k0, and at each node
  // above the cutoff a child disjoint from omega is removed (leftmost
  // child inside the largest gap, falling back to a left-to-right scan).
  // Throws a construction error if some node has no removable child.
  static CantorTree embed_porous(const IntervalSet& omega, double nu,
                                 double alpha0, int extra_levels = 4);

  int base_L() const { return L_; }
  int cutoff_k0() const { return k0_; }
  int depth() const { return depth_; }

  Interval cell(int level, std::uint64_t m) const;
  double level_weight(int level) const;  // (L-1)^-level
  bool is_kept(int level, std::uint64_t m) const;
  std::uint64_t kept_count(int level) const;  // (L-1)^level

  // Index of the removed child (0..L-1) of kept node (level, m).
  int removed_child(int level, std::uint64_t m) const;

  // Kept-cell indices of one level, ascending. Materializes the whole
  // level; sizes grow like (L-1)^level.
  std::vector<std::uint64_t> kept_at_level(int level) const;

  // Union of the closed kept cells at `level`, merged.
  IntervalSet kept_cells_as_set(int level) const;

  // Walks a root-to-depth chain choosing the pick(level, n_kept)-th kept
  // child at each step; returns the depth-level cell index.
  std::uint64_t descend_chain(
      const std::function<int(int, int)>& pick) const;

  // Checks omega subset-of X(alpha0) exactly: every part of omega must be
  // covered by the union of kept cells at level min(k0+1, depth).
  bool contains_in_neighborhood(const IntervalSet& omega,
                                double alpha0) const;

  // Raw access used by (de)serialization; levels 0..explicit_top have
  // materialized index lists, aligned removal choices one level less.
  int explicit_top() const { return explicit_top_; }
  const std::vector<std::vector<std::uint64_t>>& explicit_kept() const {
    return kept_;
  }
  const std::vector<std::vector<std::uint8_t>>& explicit_removed() const {
    return removed_;
  }
  static CantorTree from_parts(int L, int k0, int depth,
                               std::vector<std::vector<std::uint64_t>> kept,
                               std::vector<std::vector<std::uint8_t>> removed);

 public:
  CantorTree() = default;

 private:

  int L_ = 2;
  int k0_ = 0;
  int depth_ = 0;
  int explicit_top_ = 0;  // kept_ stored for levels 0..explicit_top_
  std::vector<std::vector<std::uint64_t>> kept_;
  std::vector<std::vector<std::uint8_t>> removed_;
};

// The natural Cantor measure: kept cell at level k carries (L-1)^-k.
// Evaluation happens at the depth-level refinement, spreading each depth
// cell's weight uniformly over the cell, so that kept cells at any level
// <= depth get exactly (L-1)^-level.
struct RegularMeasure {
  CantorTree tree;
  double delta = 0.0;  // log(L-1)/log L
  double C_R = 0.0;    // 2L

  static RegularMeasure from_tree(CantorTree t);

  // mu_X(I); I must be at least one depth-cell long.
  double measure_of_interval(const Interval& I) const;
};

struct RegularityReport {
  bool upper_ok = false;
  bool lower_ok = false;
  double worst_upper_ratio = 0.0;  // max mu(I)/|I|^delta over samples
  double worst_lower_ratio = 0.0;  // min mu(I)/|I|^delta, centered samples
  int samples = 0;
};

// Samples intervals with |I| log-uniform in [L^-depth, 1]: free-position
// intervals for the upper bound, intervals centered at kept depth-cell
// endpoints for the lower bound.
RegularityReport regularity_check(const RegularMeasure& mu, int n_samples,
                                  std::uint64_t seed);

// Per-sample rows for CSV sweeps: scale, ratio_upper, ratio_lower.
struct RegularitySample {
  double scale;
  double ratio_upper;
  double ratio_lower;
};
std::vector<RegularitySample> regularity_sweep(const RegularMeasure& mu,
                                               int n_samples,
                                               std::uint64_t seed);

}  // namespace fuplab
