#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace fuplab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
};

// Finite disjoint union of closed intervals inside a working window.
// Parts are sorted by lo and pairwise non-overlapping; degenerate parts
// (lo == hi) are allowed and act as gap breakers. "Disjoint from" an
// interval J means: no part meets the interior of J (shared endpoints
// are fine, which matches how gaps between closed sets behave).
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval window) : window_(window) {}

  static IntervalSet normalize(const std::vector<Interval>& raw,
                               Interval window = {0.0, 1.0});

  const std::vector<Interval>& parts() const { return parts_; }
  const Interval& window() const { return window_; }
  bool empty() const { return parts_.empty(); }

  bool contains_point(double x) const;
  // total length of all parts
  double total_length() const;
  // union with the parts of `other` (windows must agree)
  IntervalSet unite(const IntervalSet& other) const;
  // true iff every part of this set is covered by `cover`,
  // up to a slack `tol` at part boundaries
  bool covered_by(const IntervalSet& cover, double tol = 0.0) const;

 private:
  std::vector<Interval> parts_;
  Interval window_{0.0, 1.0};
};

struct PorosityReport {
  bool certified = false;
  double nu_nominal = 0.0;    // fraction demanded of every scanned window
  double nu_certified = 0.0;  // continuum constant guaranteed when certified
  std::optional<Interval> witness;  // failing window when not certified
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  long long windows_scanned = 0;
};

// X + [-s, s], clipped to the window.
IntervalSet neighborhood(const IntervalSet& x, double s);

// Longest closed subinterval J of `within` whose interior misses omega,
// together with its length. Ties are broken towards the smallest lo.
// Returns a degenerate J with length 0 when `within` is fully covered.
std::pair<Interval, double> largest_gap(const IntervalSet& omega,
                                        const Interval& within);

// Sliding-window certification of Definition-style porosity. Scales run
// down a ratio-2 ladder from alpha1 towards alpha0 (every scanned scale
// stays >= alpha0); window translates step by nu*scale/4. A set that
// passes every window at gap fraction nu is porous in the continuum sense
// with constant nu/4, which is what nu_certified reports.
PorosityReport porosity_check(const IntervalSet& omega, double nu,
                              double alpha0, double alpha1);

// Deterministic generator of nu-porous test sets, 0 < nu <= 1/3. The
// output is validated with porosity_check before being returned.
IntervalSet random_porous(double nu, double alpha0, std::uint64_t seed);

}  // namespace fuplab
