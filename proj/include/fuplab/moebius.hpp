#pragma once

#include <complex>

namespace fuplab {

// Unit-determinant 2x2 real matrix identified with its negative. The
// canonical sign makes the first entry that is clearly nonzero (row-major
// order) positive. Group elements act on the upper half-plane by Mobius
// transformations; one-parameter subgroups below fix the flow
// conventions for the whole dynamics module:
//   geodesic   a_t      = diag(e^{t/2}, e^{-t/2})     (right action)
//   stable     n_plus_s = [[1, s], [0, 1]]            (upper, U_+)
//   unstable   n_minus_s= [[1, 0], [s, 1]]            (lower, U_-)
// With right multiplication these satisfy
//   phi_t o e^{s U_-} = e^{e^{ t} s U_-} o phi_t,
//   phi_t o e^{s U_+} = e^{e^{-t} s U_+} o phi_t,
// so the unstable direction expands under the forward geodesic flow.
struct MoebiusElement {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static MoebiusElement identity() { return {}; }

  double det() const { return a * d - b * c; }
  MoebiusElement inverse() const { return {d, -b, -c, a}; }

  // rescale to unit determinant and fix the canonical sign
  MoebiusElement normalized() const;
  MoebiusElement canonical_sign() const;

  // Mobius action on a point of the upper half-plane
  std::complex<double> apply(std::complex<double> z) const;

  double frobenius_norm() const;
};

MoebiusElement operator*(const MoebiusElement& x, const MoebiusElement& y);

// distance between projective classes: min over the sign ambiguity of
// the Frobenius distance
double frobenius_distance(const MoebiusElement& x, const MoebiusElement& y);

// hyperbolic distance in the upper half-plane
double hyperbolic_distance(std::complex<double> z1, std::complex<double> z2);

MoebiusElement geodesic_element(double t);               // a_t
MoebiusElement stable_element(double s);                 // n_plus_s
MoebiusElement unstable_element(double s);               // n_minus_s
// exp(v1 H + v3 N_+): the stable-slice factor exp(v1 H_p + v3 U_+)
MoebiusElement stable_combo_element(double v1, double v3);
// exp(v1 H + v3 N_-)
MoebiusElement unstable_combo_element(double v1, double v3);

}  // namespace fuplab
