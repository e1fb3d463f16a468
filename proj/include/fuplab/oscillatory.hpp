#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuplab/interval_set.hpp"

namespace fuplab {

enum class PhaseKind { Fourier, Hyperbolic };

// Oscillatory kernel h^(-1/2) exp(i Phi(x,y)/h) b(x,y).
//   Fourier:    Phi(x,y) = x*y
//   Hyperbolic: Phi(y,y') = 2w log|y-y'| - w log 4, with |y-y'| the chord
//               distance on the unit-circumference circle (periodic wrap).
// The amplitude is a tensor product of C-infinity window bumps, times a
// smooth diagonal cutoff vanishing for distance <= d_min and equal to 1
// from 2*d_min on. Hyperbolic kernels require d_min > 0 so that the
// mixed phase derivative stays finite on the support.
struct KernelSpec {
  PhaseKind phase = PhaseKind::Fourier;
  double w = 1.0;        // hyperbolic frequency parameter
  double d_min = 0.0;    // diagonal cutoff; must be > 0 for Hyperbolic
  Interval x_window{0.0, 1.0};
  Interval y_window{0.0, 1.0};
  double amp_scale = 1.0;

  double phase_at(double x, double y) const;
  double amplitude_at(double x, double y) const;
  void validate() const;
};

// smooth C-infinity bump exp(1 - 1/(1-t^2)) rescaled to a window; 1 at
// the midpoint, 0 outside
double window_bump(const Interval& window, double x);

struct DiscretizedOperator {
  double h = 0.0;
  int oversample = 8;
  double dx = 0.0;  // grid step, same for both axes
  std::vector<double> x_grid;
  std::vector<double> y_grid;
  Eigen::MatrixXcd entries;  // (i,j) = dx * h^(-1/2) e^{i Phi/h} b
};

struct MaskedOperator {
  DiscretizedOperator op;
  std::vector<bool> x_mask;
  std::vector<bool> y_mask;
  double rho = 0.0;

  Eigen::MatrixXcd masked_matrix() const;     // zeros outside the masks
  Eigen::MatrixXcd masked_submatrix() const;  // masked rows/cols only
};

// Midpoint-rule discretization; dimension = window length / dx with
// dx <= h/oversample. Exceeding `dim_cap` is a resource error.
DiscretizedOperator build_operator(const KernelSpec& spec, double h,
                                   int oversample, int dim_cap = 1 << 15);

// Largest singular value by block power iteration on A*A with a seeded
// random start; relative tolerance `tol` must hold on two consecutive
// iterations. Throws a numeric error when max_iter is exhausted.
double operator_norm(const Eigen::MatrixXcd& a, double tol,
                     std::uint64_t seed = 1234, int max_iter = 10000);

// Indicator masks for the grid points inside X(h^rho), Y(h^rho).
MaskedOperator mask(const DiscretizedOperator& op, const IntervalSet& x,
                    const IntervalSet& y, double rho);

struct DecayFit {
  std::vector<std::pair<double, double>> points;  // (h, norm)
  double beta = 0.0;       // log norm ~ intercept + beta log h
  double intercept = 0.0;
  double beta_stderr = 0.0;
  double r_squared = 0.0;
  int n_excluded = 0;  // dropped non-positive norms
};

// Ordinary least squares of log(norm) against log(h). Needs >= 3 usable
// points; non-positive norms are excluded and counted.
DecayFit fit_beta(const std::vector<std::pair<double, double>>& points);

enum class FupMode { Raw, Embedded };

struct FupRunRow {
  double h = 0.0;
  double rho = 0.0;
  int dim = 0;  // full (virtual) grid dimension
  int dim_x = 0;
  int dim_y = 0;
  double norm_masked = 0.0;
  double norm_unmasked = 0.0;  // NaN when skipped for size
  int oversample = 0;
};

struct FupExperimentResult {
  DecayFit fit;
  std::vector<FupRunRow> rows;
  std::vector<std::string> warnings;
};

struct FupOptions {
  int oversample = 8;
  int dim_cap = 1 << 15;
  // full-matrix norms are only computed when the grid dimension is at
  // most this; otherwise norm_unmasked is NaN and a warning is recorded
  int unmasked_dim_limit = 1 << 12;
  double norm_tol = 1e-7;
  // weight boundary grid cells by their covered fraction instead of the
  // midpoint indicator; smooths the mask quantization as h varies
  bool soft_mask_edges = true;
  unsigned threads = 0;  // 0 = hardware
  std::uint64_t seed = 1;
};

// The porous-set uncertainty experiment: for each h build the operator
// restricted to the mask neighborhoods (K = 1, so h^rho fattening),
// measure the norm, then fit the decay exponent. Raw mode masks by
// Omega(h^rho) directly; Embedded mode first runs the Cantor embedding
// of each set at alpha0 = h^rho and masks by the regular set's 2h^rho
// neighborhood. When the full grid would exceed dim_cap the oversample
// factor is reduced (recorded as a warning).
FupExperimentResult fup_experiment(const IntervalSet& omega_plus,
                                   const IntervalSet& omega_minus,
                                   double nu, const KernelSpec& spec,
                                   double rho,
                                   const std::vector<double>& h_list,
                                   FupMode mode, const FupOptions& opt = {});

}  // namespace fuplab
