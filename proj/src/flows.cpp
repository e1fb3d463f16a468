#include "fuplab/flows.hpp"

#include <cmath>

#include "fuplab/common.hpp"

namespace fuplab {

double model_distance(const UnitTangentPoint& p, const UnitTangentPoint& q) {
  double frob = frobenius_distance(p.rep, q.rep);
  double dw = std::log(p.scale_w / q.scale_w);
  return std::sqrt(frob * frob + dw * dw);
}

UnitTangentPoint geodesic_flow(const FuchsianGroup& group,
                               const UnitTangentPoint& g, double t) {
  if (!std::isfinite(t)) {
    fail(ErrorKind::invalid_input, "geodesic_flow", "t must be finite");
  }
  return {reduce(g.rep * geodesic_element(t), group), g.scale_w};
}

UnitTangentPoint horocycle_flow(const FuchsianGroup& group,
                                const UnitTangentPoint& g, double s,
                                Direction direction) {
  if (!std::isfinite(s)) {
    fail(ErrorKind::invalid_input, "horocycle_flow", "s must be finite");
  }
  MoebiusElement step = direction == Direction::Stable ? stable_element(s)
                                                       : unstable_element(s);
  return {reduce(g.rep * step, group), g.scale_w};
}

Observable constant_observable(double value) {
  return [value](const UnitTangentPoint&) { return value; };
}

Observable bump_observable(const FuchsianGroup& group,
                           std::complex<double> q, double radius) {
  if (!(radius > 0.0)) {
    fail(ErrorKind::invalid_input, "bump_observable", "radius must be > 0");
  }
  return [&group, q, radius](const UnitTangentPoint& g) {
    const std::complex<double> i(0.0, 1.0);
    MoebiusElement r = reduce(g.rep, group);
    double t = hyperbolic_distance(r.apply(i), q) / radius;
    if (t >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
  };
}

double horocycle_average(const FuchsianGroup& group, const Observable& f,
                         const UnitTangentPoint& g, double T, int n_steps) {
  if (!(T > 0.0)) {
    fail(ErrorKind::invalid_input, "horocycle_average", "T must be > 0");
  }
  if (n_steps < 2) {
    fail(ErrorKind::invalid_input, "horocycle_average", "n_steps >= 2");
  }
  const double ds = T / n_steps;
  UnitTangentPoint cur = {reduce(g.rep, group), g.scale_w};
  // advance to the first midpoint, then step by ds
  cur = horocycle_flow(group, cur, ds / 2.0, Direction::Stable);
  double sum = f(cur);
  for (int k = 1; k < n_steps; k++) {
    cur = horocycle_flow(group, cur, ds, Direction::Stable);
    sum += f(cur);
  }
  return sum / n_steps;
}

MonteCarloEstimate liouville_average(const FuchsianGroup& group,
                                     const Observable& f, int n_samples,
                                     std::uint64_t seed) {
  if (n_samples < 1) {
    fail(ErrorKind::invalid_input, "liouville_average", "n_samples >= 1");
  }
  // Iwasawa box that contains the Dirichlet domain about i. The radius
  // bound 2.5 covers the Bolza octagon (circumradius ~2.448); loaded
  // groups with a larger domain would need a bigger box, which the
  // rejection below would surface as a very low acceptance rate.
  const double R = 2.5;
  const double y_min = std::exp(-R), y_max = std::exp(R);
  const double x_max = std::sinh(R) * 1.05;
  const double inv_ymin = 1.0 / y_min, inv_ymax = 1.0 / y_max;
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  constexpr double kPi = 3.14159265358979323846264338327950288;
  for (int i = 0; i < n_samples; i++) {
    std::complex<double> z;
    for (;;) {
      double x = rng.uniform(-x_max, x_max);
      // density proportional to 1/y^2 on [y_min, y_max]
      double u = rng.next_double();
      double y = 1.0 / (inv_ymin - u * (inv_ymin - inv_ymax));
      z = {x, y};
      if (in_dirichlet_domain(z, group)) break;
    }
    double theta = rng.uniform(0.0, kPi);
    double sy = std::sqrt(z.imag());
    MoebiusElement nak =
        MoebiusElement{1.0, z.real(), 0.0, 1.0} *
        MoebiusElement{sy, 0.0, 0.0, 1.0 / sy} *
        MoebiusElement{std::cos(theta), std::sin(theta), -std::sin(theta),
                       std::cos(theta)};
    double v = f({nak.canonical_sign(), 1.0});
    sum += v;
    sum_sq += v * v;
  }
  MonteCarloEstimate est;
  est.n_samples = n_samples;
  est.value = sum / n_samples;
  if (n_samples > 1) {
    double var =
        (sum_sq - sum * sum / n_samples) / (n_samples - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / n_samples);
  }
  return est;
}

std::optional<double> hitting_time(const FuchsianGroup& group,
                                   const MetricBall& ball,
                                   const UnitTangentPoint& g, double s_max,
                                   Direction direction) {
  if (!(s_max > 0.0)) {
    fail(ErrorKind::invalid_input, "hitting_time", "s_max must be > 0");
  }
  if (!(ball.radius > 0.0)) {
    fail(ErrorKind::invalid_input, "hitting_time", "ball radius must be > 0");
  }
  const double step = ball.radius / 4.0;
  if (step > s_max) {
    // still test s = 0 and s = s_max below
  }
  UnitTangentPoint cur = {reduce(g.rep, group), g.scale_w};
  double s = 0.0;
  for (;;) {
    if (model_distance(cur, ball.center) <= ball.radius) return s;
    if (s >= s_max) return std::nullopt;
    double ds = std::min(step, s_max - s);
    cur = horocycle_flow(group, cur, ds, direction);
    s += ds;
  }
}

}  // namespace fuplab
