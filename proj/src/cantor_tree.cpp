#include "fuplab/cantor_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fuplab/common.hpp"

namespace fuplab {

namespace {

// Does any part of omega forbid removing this child cell? Positive-length
// parts block through interior overlap; degenerate parts block the whole
// closed cell, so that boundary points always survive in a kept sibling.
bool child_blocked(const IntervalSet& omega, const Interval& child) {
  for (const Interval& p : omega.parts()) {
    if (p.lo == p.hi) {
      if (child.lo <= p.lo && p.lo <= child.hi) return true;
    } else if (p.lo < child.hi && p.hi > child.lo) {
      return true;
    }
  }
  return false;
}

}  // namespace

CantorTree CantorTree::embed_porous(const IntervalSet& omega, double nu,
                                    double alpha0, int extra_levels) {
  if (!(nu > 0.0 && nu < 1.0)) {
    fail(ErrorKind::invalid_input, "embed_porous", "nu must be in (0,1)");
  }
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) {
    fail(ErrorKind::invalid_input, "embed_porous",
         "alpha0 must be in (0,1]");
  }
  if (extra_levels < 1) {
    fail(ErrorKind::invalid_input, "embed_porous", "extra_levels >= 1");
  }
  for (const Interval& p : omega.parts()) {
    if (p.lo < 0.0 || p.hi > 1.0) {
      fail(ErrorKind::invalid_input, "embed_porous",
           "omega must live inside [0,1]");
    }
  }

  CantorTree t;
  t.L_ = static_cast<int>(std::ceil(2.0 / nu - 1e-9));
  const int L = t.L_;

  // unique k0 with L^(-1-k0) < alpha0 <= L^-k0
  int k0 = static_cast<int>(
      std::floor(std::log(1.0 / alpha0) / std::log(double(L)) + 1e-9));
  if (k0 < 0) k0 = 0;
  while (std::pow(double(L), -(k0 + 1)) >= alpha0) k0++;
  while (k0 > 0 && std::pow(double(L), -k0) < alpha0) k0--;
  t.k0_ = k0;
  t.depth_ = k0 + extra_levels;
  t.explicit_top_ = std::min(k0 + 1, t.depth_);

  t.kept_.assign(t.explicit_top_ + 1, {});
  t.removed_.assign(t.explicit_top_, {});
  t.kept_[0] = {0};

  for (int k = 0; k < t.explicit_top_; k++) {
    const double cell_len = std::pow(double(L), -k);
    const double child_len = cell_len / L;
    t.removed_[k].reserve(t.kept_[k].size());
    t.kept_[k + 1].reserve(t.kept_[k].size() * (L - 1));
    for (std::uint64_t m : t.kept_[k]) {
      const double lo = double(m) * cell_len;
      Interval cell{lo, lo + cell_len};
      auto [gap, gap_len] = largest_gap(omega, cell);
      (void)gap_len;
      // candidate removal order: children inside the largest gap first
      // (leftmost), then everything else left to right
      int chosen = -1;
      const double tol = 1e-12 * cell_len;
      for (int pass = 0; pass < 2 && chosen < 0; pass++) {
        for (int c = 0; c < L; c++) {
          Interval child{lo + c * child_len, lo + (c + 1) * child_len};
          bool in_gap =
              child.lo >= gap.lo - tol && child.hi <= gap.hi + tol;
          if ((pass == 0) != in_gap) continue;
          if (!child_blocked(omega, child)) {
            chosen = c;
            break;
          }
        }
      }
      if (chosen < 0) {
        fail(ErrorKind::construction, "embed_porous",
             "no removable child at level " + std::to_string(k) +
                 ", node " + std::to_string(m));
      }
      t.removed_[k].push_back(static_cast<std::uint8_t>(chosen));
      for (int c = 0; c < L; c++) {
        if (c != chosen) t.kept_[k + 1].push_back(m * L + c);
      }
    }
  }

  if (!t.contains_in_neighborhood(omega, alpha0)) {
    fail(ErrorKind::construction, "embed_porous",
         "containment check failed after construction");
  }
  return t;
}

CantorTree CantorTree::from_parts(
    int L, int k0, int depth, std::vector<std::vector<std::uint64_t>> kept,
    std::vector<std::vector<std::uint8_t>> removed) {
  if (L < 2 || k0 < 0 || depth < 1) {
    fail(ErrorKind::invalid_input, "tree_load", "bad L/k0/depth");
  }
  CantorTree t;
  t.L_ = L;
  t.k0_ = k0;
  t.depth_ = depth;
  t.explicit_top_ = std::min(k0 + 1, depth);
  if (kept.size() != static_cast<std::size_t>(t.explicit_top_ + 1) ||
      removed.size() != static_cast<std::size_t>(t.explicit_top_)) {
    fail(ErrorKind::invalid_input, "tree_load",
         "level count does not match k0/depth");
  }
  if (kept[0] != std::vector<std::uint64_t>{0}) {
    fail(ErrorKind::invalid_input, "tree_load", "root level must be {0}");
  }
  for (int k = 0; k < t.explicit_top_; k++) {
    if (removed[k].size() != kept[k].size()) {
      fail(ErrorKind::invalid_input, "tree_load",
           "removal list misaligned at level " + std::to_string(k));
    }
    std::size_t want = kept[k].size() * (L - 1);
    if (kept[k + 1].size() != want) {
      fail(ErrorKind::invalid_input, "tree_load",
           "level " + std::to_string(k + 1) + " must hold L-1 children");
    }
    std::size_t pos = 0;
    for (std::size_t i = 0; i < kept[k].size(); i++) {
      std::uint64_t m = kept[k][i];
      int rm = removed[k][i];
      if (rm < 0 || rm >= L) {
        fail(ErrorKind::invalid_input, "tree_load", "removed child out of range");
      }
      for (int c = 0; c < L; c++) {
        if (c == rm) continue;
        if (kept[k + 1][pos++] != m * L + c) {
          fail(ErrorKind::invalid_input, "tree_load",
               "child indices inconsistent at level " + std::to_string(k + 1));
        }
      }
    }
  }
  t.kept_ = std::move(kept);
  t.removed_ = std::move(removed);
  return t;
}

Interval CantorTree::cell(int level, std::uint64_t m) const {
  double len = std::pow(double(L_), -level);
  return {double(m) * len, double(m + 1) * len};
}

double CantorTree::level_weight(int level) const {
  return std::pow(double(L_ - 1), -level);
}

std::uint64_t CantorTree::kept_count(int level) const {
  std::uint64_t n = 1;
  for (int k = 0; k < level; k++) n *= (L_ - 1);
  return n;
}

int CantorTree::removed_child(int level, std::uint64_t m) const {
  if (level < 0 || level >= depth_) {
    fail(ErrorKind::invalid_input, "removed_child", "level out of range");
  }
  if (level < explicit_top_) {
    const auto& ms = kept_[level];
    auto it = std::lower_bound(ms.begin(), ms.end(), m);
    if (it == ms.end() || *it != m) {
      fail(ErrorKind::invalid_input, "removed_child", "node not kept");
    }
    return removed_[level][static_cast<std::size_t>(it - ms.begin())];
  }
  return 0;  // below the cutoff the leftmost child n(m,k) = Lm is dropped
}

bool CantorTree::is_kept(int level, std::uint64_t m) const {
  if (level < 0 || level > depth_) return false;
  if (level <= explicit_top_) {
    const auto& ms = kept_[level];
    return std::binary_search(ms.begin(), ms.end(), m);
  }
  // digits below the explicit levels must avoid the removed leftmost child
  std::uint64_t rest = m;
  for (int k = level; k > explicit_top_; k--) {
    if (rest % L_ == 0) return false;
    rest /= L_;
  }
  const auto& ms = kept_[explicit_top_];
  return std::binary_search(ms.begin(), ms.end(), rest);
}

std::vector<std::uint64_t> CantorTree::kept_at_level(int level) const {
  if (level < 0 || level > depth_) {
    fail(ErrorKind::invalid_input, "kept_at_level", "level out of range");
  }
  if (level <= explicit_top_) return kept_[level];
  std::vector<std::uint64_t> cur = kept_[explicit_top_];
  for (int k = explicit_top_; k < level; k++) {
    std::vector<std::uint64_t> next;
    next.reserve(cur.size() * (L_ - 1));
    for (std::uint64_t m : cur) {
      for (int c = 1; c < L_; c++) next.push_back(m * L_ + c);
    }
    cur = std::move(next);
  }
  return cur;
}

IntervalSet CantorTree::kept_cells_as_set(int level) const {
  std::vector<Interval> cells;
  auto ms = kept_at_level(level);
  cells.reserve(ms.size());
  for (std::uint64_t m : ms) cells.push_back(cell(level, m));
  return IntervalSet::normalize(cells);
}

std::uint64_t CantorTree::descend_chain(
    const std::function<int(int, int)>& pick) const {
  std::uint64_t m = 0;
  for (int k = 0; k < depth_; k++) {
    int rm = removed_child(k, m);
    int slot = pick(k, L_ - 1);
    if (slot < 0 || slot >= L_ - 1) {
      fail(ErrorKind::invalid_input, "descend_chain", "pick out of range");
    }
    int c = slot < rm ? slot : slot + 1;
    m = m * L_ + c;
  }
  return m;
}

bool CantorTree::contains_in_neighborhood(const IntervalSet& omega,
                                          double alpha0) const {
  (void)alpha0;  // covered at level k0+1 implies distance < alpha0
  int level = std::min(k0_ + 1, depth_);
  IntervalSet cover = kept_cells_as_set(level);
  return omega.covered_by(cover, 1e-12);
}

RegularMeasure RegularMeasure::from_tree(CantorTree t) {
  RegularMeasure mu;
  mu.delta = std::log(double(t.base_L() - 1)) / std::log(double(t.base_L()));
  mu.C_R = 2.0 * t.base_L();
  mu.tree = std::move(t);
  return mu;
}

namespace {

double measure_descend(const CantorTree& t, int level, std::uint64_t m,
                       double weight, const Interval& I) {
  Interval c = t.cell(level, m);
  if (c.hi <= I.lo || c.lo >= I.hi) return 0.0;
  if (I.lo <= c.lo && c.hi <= I.hi) return weight;
  if (level == t.depth()) {
    double overlap = std::min(c.hi, I.hi) - std::max(c.lo, I.lo);
    return weight * std::max(0.0, overlap) / c.length();
  }
  int rm = t.removed_child(level, m);
  double child_weight = weight / (t.base_L() - 1);
  double sum = 0.0;
  for (int cidx = 0; cidx < t.base_L(); cidx++) {
    if (cidx == rm) continue;
    sum += measure_descend(t, level + 1, m * t.base_L() + cidx,
                           child_weight, I);
  }
  return sum;
}

}  // namespace

double RegularMeasure::measure_of_interval(const Interval& I) const {
  if (I.lo > I.hi) {
    fail(ErrorKind::invalid_input, "measure_of_interval", "lo > hi");
  }
  double min_len = std::pow(double(tree.base_L()), -tree.depth());
  if (I.length() < min_len * (1.0 - 1e-12)) {
    fail(ErrorKind::invalid_input, "measure_of_interval",
         "interval below depth resolution");
  }
  return measure_descend(tree, 0, 0, 1.0, I);
}

namespace {

RegularitySample one_sample(const RegularMeasure& mu, Rng& rng) {
  const CantorTree& t = mu.tree;
  const double min_len = std::pow(double(t.base_L()), -t.depth());
  const double log_min = std::log(min_len);
  RegularitySample s{};
  double len = std::exp(rng.uniform(log_min, 0.0));
  s.scale = len;

  // upper bound: free position
  double center = rng.next_double();
  double m_up =
      mu.measure_of_interval({center - len / 2.0, center + len / 2.0});
  s.ratio_upper = m_up / std::pow(len, mu.delta);

  // lower bound: centered at a kept depth-cell endpoint (a point of X)
  std::uint64_t mcell = t.descend_chain([&](int, int n_kept) {
    return static_cast<int>(rng.next_below(n_kept));
  });
  double x = t.cell(t.depth(), mcell).hi;
  double m_lo = mu.measure_of_interval({x - len / 2.0, x + len / 2.0});
  s.ratio_lower = m_lo / std::pow(len, mu.delta);
  return s;
}

}  // namespace

std::vector<RegularitySample> regularity_sweep(const RegularMeasure& mu,
                                               int n_samples,
                                               std::uint64_t seed) {
  if (n_samples < 1) {
    fail(ErrorKind::invalid_input, "regularity_check", "n_samples >= 1");
  }
  Rng rng(seed);
  std::vector<RegularitySample> out;
  out.reserve(n_samples);
  for (int i = 0; i < n_samples; i++) out.push_back(one_sample(mu, rng));
  return out;
}

RegularityReport regularity_check(const RegularMeasure& mu, int n_samples,
                                  std::uint64_t seed) {
  auto samples = regularity_sweep(mu, n_samples, seed);
  RegularityReport rep;
  rep.samples = n_samples;
  rep.worst_upper_ratio = 0.0;
  rep.worst_lower_ratio = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    rep.worst_upper_ratio = std::max(rep.worst_upper_ratio, s.ratio_upper);
    rep.worst_lower_ratio = std::min(rep.worst_lower_ratio, s.ratio_lower);
  }
  rep.upper_ok = rep.worst_upper_ratio <= mu.C_R * (1.0 + 1e-12);
  rep.lower_ok = rep.worst_lower_ratio >= (1.0 / mu.C_R) * (1.0 - 1e-12);
  return rep;
}

}  // namespace fuplab
