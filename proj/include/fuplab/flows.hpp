#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "fuplab/fuchsian.hpp"
#include "fuplab/moebius.hpp"

namespace fuplab {

enum class Direction { Stable, Unstable };

// Point of the unit tangent bundle model Gamma\PSL(2,R), extended by the
// homogeneous dilation coordinate scale_w (the |xi| level, default 1).
struct UnitTangentPoint {
  MoebiusElement rep;  // reduced coset representative
  double scale_w = 1.0;

  static UnitTangentPoint base() { return {MoebiusElement::identity(), 1.0}; }
};

// Proxy metric on the model: Frobenius distance between reduced
// representatives plus the log-ratio of the dilation coordinates.
double model_distance(const UnitTangentPoint& p, const UnitTangentPoint& q);

UnitTangentPoint geodesic_flow(const FuchsianGroup& group,
                               const UnitTangentPoint& g, double t);
UnitTangentPoint horocycle_flow(const FuchsianGroup& group,
                                const UnitTangentPoint& g, double s,
                                Direction direction);

// Gamma-invariant scalar observable on the model.
using Observable = std::function<double(const UnitTangentPoint&)>;

Observable constant_observable(double value);
// psi(d(reduce(g).i, q)) with a smooth bump profile of radius `radius`
Observable bump_observable(const FuchsianGroup& group,
                           std::complex<double> q, double radius);

// (1/T) int_0^T f(e^{s U_+} g) ds by the midpoint rule with reduction at
// every step.
double horocycle_average(const FuchsianGroup& group, const Observable& f,
                         const UnitTangentPoint& g, double T, int n_steps);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int n_samples = 0;
};

// Monte Carlo Liouville average: Iwasawa-box proposals restricted to the
// Dirichlet fundamental domain, uniform fibre angle; deterministic in
// the seed.
MonteCarloEstimate liouville_average(const FuchsianGroup& group,
                                     const Observable& f, int n_samples,
                                     std::uint64_t seed);

struct MetricBall {
  UnitTangentPoint center;
  double radius = 0.0;
};

// Smallest sampled s in [0, s_max] whose orbit point enters the ball;
// the sampling step is ball.radius / 4.
std::optional<double> hitting_time(const FuchsianGroup& group,
                                   const MetricBall& ball,
                                   const UnitTangentPoint& g, double s_max,
                                   Direction direction);

}  // namespace fuplab
