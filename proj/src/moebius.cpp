#include "fuplab/moebius.hpp"

#include <cmath>

#include "fuplab/common.hpp"

namespace fuplab {

MoebiusElement MoebiusElement::normalized() const {
  double dt = det();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    fail(ErrorKind::invalid_input, "moebius",
         "determinant must be positive and finite");
  }
  double s = 1.0 / std::sqrt(dt);
  MoebiusElement m{a * s, b * s, c * s, d * s};
  return m.canonical_sign();
}

MoebiusElement MoebiusElement::canonical_sign() const {
  const double eps = 1e-9;
  double lead = 0.0;
  for (double e : {a, b, c, d}) {
    if (std::fabs(e) > eps) {
      lead = e;
      break;
    }
  }
  if (lead < 0.0) return {-a, -b, -c, -d};
  return *this;
}

std::complex<double> MoebiusElement::apply(std::complex<double> z) const {
  return (a * z + b) / (c * z + d);
}

double MoebiusElement::frobenius_norm() const {
  return std::sqrt(a * a + b * b + c * c + d * d);
}

MoebiusElement operator*(const MoebiusElement& x, const MoebiusElement& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

double frobenius_distance(const MoebiusElement& x, const MoebiusElement& y) {
  double dm = 0.0, dp = 0.0;
  double xs[4] = {x.a, x.b, x.c, x.d};
  double ys[4] = {y.a, y.b, y.c, y.d};
  for (int i = 0; i < 4; i++) {
    dm += (xs[i] - ys[i]) * (xs[i] - ys[i]);
    dp += (xs[i] + ys[i]) * (xs[i] + ys[i]);
  }
  return std::sqrt(std::min(dm, dp));
}

double hyperbolic_distance(std::complex<double> z1, std::complex<double> z2) {
  double num = std::norm(z1 - z2);
  double den = 2.0 * z1.imag() * z2.imag();
  if (!(den > 0.0)) {
    fail(ErrorKind::invalid_input, "hyperbolic_distance",
         "points must lie in the upper half-plane");
  }
  return std::acosh(1.0 + num / den);
}

MoebiusElement geodesic_element(double t) {
  double e = std::exp(t / 2.0);
  return {e, 0.0, 0.0, 1.0 / e};
}

MoebiusElement stable_element(double s) { return {1.0, s, 0.0, 1.0}; }

MoebiusElement unstable_element(double s) { return {1.0, 0.0, s, 1.0}; }

namespace {

double sinch_half(double v) {
  // (e^{v/2} - e^{-v/2}) / v, continuous at 0
  if (std::fabs(v) < 1e-8) return 1.0 + v * v / 24.0;
  return (std::exp(v / 2.0) - std::exp(-v / 2.0)) / v;
}

}  // namespace

MoebiusElement stable_combo_element(double v1, double v3) {
  double e = std::exp(v1 / 2.0);
  return {e, v3 * sinch_half(v1), 0.0, 1.0 / e};
}

MoebiusElement unstable_combo_element(double v1, double v3) {
  double e = std::exp(v1 / 2.0);
  return {e, 0.0, v3 * sinch_half(v1), 1.0 / e};
}

}  // namespace fuplab
