#include "fuplab/witness.hpp"

#include <cmath>

#include "fuplab/common.hpp"

namespace fuplab {

WitnessRecord porosity_witness(const FuchsianGroup& group,
                               const std::vector<WitnessTarget>& targets,
                               int letter, const UnitTangentPoint& g,
                               double tau, double T, const SliceSpec& slice) {
  if (letter < 1 || letter > static_cast<int>(targets.size())) {
    fail(ErrorKind::invalid_input, "porosity_witness",
         "letter must index a target ball");
  }
  if (!(T > 0.0)) {
    fail(ErrorKind::invalid_input, "porosity_witness", "T must be > 0");
  }
  const double k1 = 3.0 * T;
  const double tau_floor = k1 * std::pow(2.0, -20);
  if (!(tau >= tau_floor && tau <= 1.0)) {
    fail(ErrorKind::invalid_input, "porosity_witness",
         "tau must satisfy 3T*2^-20 <= tau <= 1");
  }
  if (slice.n_samples < 1) {
    fail(ErrorKind::invalid_input, "porosity_witness", "n_samples >= 1");
  }
  const WitnessTarget& target = targets[static_cast<std::size_t>(letter - 1)];

  WitnessRecord rec;
  rec.letter = letter;
  rec.tau = tau;

  // unique j with e^{j-1} tau < T <= e^j tau, settled in double arithmetic
  int j = static_cast<int>(std::ceil(std::log(T / tau) - 1e-12));
  while (std::exp(double(j)) * tau < T) j++;
  while (j > 0 && std::exp(double(j - 1)) * tau >= T) j--;
  rec.j = j;
  const double ej = std::exp(double(j));

  UnitTangentPoint gj = geodesic_flow(group, g, double(j));
  auto hit = hitting_time(group, {target.center, target.inner_radius}, gj, T,
                          Direction::Unstable);
  if (!hit) {
    rec.hit_found = false;
    rec.verified = false;
    rec.note = "no hitting time within [0,T]; configured T falsified";
    return rec;
  }
  rec.hit_found = true;
  rec.s_w = *hit;
  rec.s0 = rec.s_w / ej;
  rec.epsilon0 = slice.nu1 / (3.0 * T);
  const double nu0 = rec.epsilon0 * tau;

  UnitTangentPoint center = horocycle_flow(group, g, rec.s0,
                                           Direction::Unstable);

  const int n = slice.n_samples;
  auto axis = [&](int idx, double half) {
    if (n == 1) return 0.0;
    return -half + 2.0 * half * double(idx) / double(n - 1);
  };

  rec.verified = true;
  for (int is = 0; is < n; is++) {
    double s = axis(is, nu0);
    MoebiusElement on_horocycle = center.rep * unstable_element(s);
    for (int i1 = 0; i1 < n; i1++) {
      double v1 = axis(i1, slice.nu1);
      for (int i2 = 0; i2 < n; i2++) {
        double v2 = axis(i2, slice.nu1);
        for (int i3 = 0; i3 < n; i3++) {
          double v3 = axis(i3, slice.nu1);
          // slice point exp(V_+ v) exp(s U_-) (center); the D component
          // acts on the dilation coordinate only
          UnitTangentPoint sample{
              on_horocycle * stable_combo_element(v1, v3),
              center.scale_w * std::exp(v2)};
          UnitTangentPoint pushed = geodesic_flow(group, sample, double(j));
          double dist = model_distance(pushed, target.center);
          rec.samples_checked++;
          rec.max_push_distance = std::max(rec.max_push_distance, dist);
          if (dist > target.outer_radius) rec.verified = false;
        }
      }
    }
  }
  return rec;
}

}  // namespace fuplab
