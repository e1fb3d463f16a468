#include "fuplab/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "fuplab/cantor_tree.hpp"
#include "fuplab/common.hpp"

namespace fuplab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// C-infinity step: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double circle_distance(double x, double y) {
  double d = std::fabs(x - y);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

double window_bump(const Interval& window, double x) {
  double len = window.length();
  if (len <= 0.0) return 0.0;
  double t = 2.0 * (x - window.lo) / len - 1.0;
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

void KernelSpec::validate() const {
  if (phase == PhaseKind::Hyperbolic && !(d_min > 0.0)) {
    fail(ErrorKind::invalid_input, "kernel_spec",
         "hyperbolic phase needs d_min > 0");
  }
  if (d_min < 0.0 || !std::isfinite(d_min)) {
    fail(ErrorKind::invalid_input, "kernel_spec", "d_min must be >= 0");
  }
  if (amp_scale < 0.0 || amp_scale > 1.0) {
    fail(ErrorKind::invalid_input, "kernel_spec",
         "amplitude values must stay in [0,1]");
  }
}

double KernelSpec::phase_at(double x, double y) const {
  if (phase == PhaseKind::Fourier) return x * y;
  // 2w log|y-y'| - w log 4 where |y-y'| is the planar chord 2 sin(pi d)
  double d = circle_distance(x, y);
  double chord_half = std::sin(kPi * d);  // chord / 2
  if (chord_half <= 0.0) return 0.0;      // amplitude is 0 there anyway
  return 2.0 * w * std::log(chord_half);
}

double KernelSpec::amplitude_at(double x, double y) const {
  double b = amp_scale * window_bump(x_window, x) * window_bump(y_window, y);
  if (d_min > 0.0 && b != 0.0) {
    double d = phase == PhaseKind::Hyperbolic ? circle_distance(x, y)
                                              : std::fabs(x - y);
    b *= smooth_step((d - d_min) / d_min);
  }
  return b;
}

namespace {

struct Grid {
  double step = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  int oversample_eff = 0;
};

Grid make_grid(const KernelSpec& spec, double h, int oversample, int dim_cap,
               bool allow_reduction, std::vector<std::string>* warnings) {
  double len_x = spec.x_window.length();
  double len_y = spec.y_window.length();
  double len = std::max(len_x, len_y);
  if (!(len > 0.0)) {
    fail(ErrorKind::invalid_input, "build_operator", "empty windows");
  }
  int ov = oversample;
  auto dim_for = [&](int o) {
    return static_cast<long long>(std::ceil(len * o / h - 1e-9));
  };
  if (dim_for(ov) > dim_cap) {
    if (!allow_reduction) {
      fail(ErrorKind::resource, "build_operator",
           "grid dimension " + std::to_string(dim_for(ov)) +
               " exceeds cap " + std::to_string(dim_cap));
    }
    while (ov > 1 && dim_for(ov) > dim_cap) ov--;
    if (dim_for(ov) > dim_cap) {
      fail(ErrorKind::resource, "build_operator",
           "grid exceeds cap even at oversample 1");
    }
    if (warnings) {
      warnings->push_back("oversample reduced to " + std::to_string(ov) +
                          " at h=" + std::to_string(h));
    }
  }
  Grid g;
  g.oversample_eff = ov;
  long long n = dim_for(ov);
  g.step = len / static_cast<double>(n);
  auto fill = [&](const Interval& win, std::vector<double>& pts) {
    long long m = static_cast<long long>(
        std::ceil(win.length() / g.step - 1e-9));
    pts.resize(m);
    for (long long i = 0; i < m; i++) {
      pts[i] = win.lo + (static_cast<double>(i) + 0.5) * g.step;
    }
  };
  fill(spec.x_window, g.x);
  fill(spec.y_window, g.y);
  return g;
}

}  // namespace

DiscretizedOperator build_operator(const KernelSpec& spec, double h,
                                   int oversample, int dim_cap) {
  spec.validate();
  if (!(h > 0.0 && h < 1.0)) {
    fail(ErrorKind::invalid_input, "build_operator", "h must be in (0,1)");
  }
  if (oversample < 8) {
    fail(ErrorKind::invalid_input, "build_operator", "oversample >= 8");
  }
  Grid g = make_grid(spec, h, oversample, dim_cap, false, nullptr);
  DiscretizedOperator op;
  op.h = h;
  op.oversample = g.oversample_eff;
  op.dx = g.step;
  op.x_grid = g.x;
  op.y_grid = g.y;
  const double scale = g.step / std::sqrt(h);
  op.entries.resize(static_cast<Eigen::Index>(g.x.size()),
                    static_cast<Eigen::Index>(g.y.size()));
  for (std::size_t i = 0; i < g.x.size(); i++) {
    for (std::size_t j = 0; j < g.y.size(); j++) {
      double b = spec.amplitude_at(g.x[i], g.y[j]);
      if (b == 0.0) {
        op.entries(i, j) = 0.0;
        continue;
      }
      double ph = spec.phase_at(g.x[i], g.y[j]) / h;
      op.entries(i, j) = std::polar(scale * b, ph);
    }
  }
  return op;
}

double operator_norm(const Eigen::MatrixXcd& a, double tol,
                     std::uint64_t seed, int max_iter) {
  if (!(tol > 0.0)) {
    fail(ErrorKind::invalid_input, "operator_norm", "tol must be > 0");
  }
  const Eigen::Index nr = a.rows(), nc = a.cols();
  if (nr == 0 || nc == 0) return 0.0;
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  const Eigen::Index block = std::min<Eigen::Index>(8, std::min(nr, nc));
  Rng rng(seed);
  Eigen::MatrixXcd v(nc, block);
  for (Eigen::Index j = 0; j < block; j++) {
    for (Eigen::Index i = 0; i < nc; i++) {
      v(i, j) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
  v = qr.householderQ() * Eigen::MatrixXcd::Identity(nc, block);

  double sigma_prev = -1.0;
  int stable = 0;
  for (int it = 0; it < max_iter; it++) {
    Eigen::MatrixXcd w = a * v;            // nr x block
    Eigen::MatrixXcd z = a.adjoint() * w;  // nc x block, = (A*A) v
    Eigen::MatrixXcd rayleigh = v.adjoint() * z;  // block x block
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (rayleigh + rayleigh.adjoint()));
    double lam = es.eigenvalues().maxCoeff();
    double sigma = std::sqrt(std::max(0.0, lam));
    if (sigma_prev >= 0.0 &&
        std::fabs(sigma - sigma_prev) <= tol * std::max(sigma, 1e-300)) {
      stable++;
      if (stable >= 2 && it >= 4) return sigma;
    } else {
      stable = 0;
    }
    sigma_prev = sigma;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr2(z);
    v = qr2.householderQ() * Eigen::MatrixXcd::Identity(nc, block);
  }
  fail(ErrorKind::numeric, "operator_norm",
       "no convergence after " + std::to_string(max_iter) +
           " iterations; last sigma=" + std::to_string(sigma_prev));
}

MaskedOperator mask(const DiscretizedOperator& op, const IntervalSet& x,
                    const IntervalSet& y, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    fail(ErrorKind::invalid_input, "mask", "rho must be in (0,1)");
  }
  double s = std::pow(op.h, rho);
  IntervalSet xs = neighborhood(x, s);
  IntervalSet ys = neighborhood(y, s);
  MaskedOperator m;
  m.op = op;
  m.rho = rho;
  m.x_mask.resize(op.x_grid.size());
  m.y_mask.resize(op.y_grid.size());
  for (std::size_t i = 0; i < op.x_grid.size(); i++) {
    m.x_mask[i] = xs.contains_point(op.x_grid[i]);
  }
  for (std::size_t j = 0; j < op.y_grid.size(); j++) {
    m.y_mask[j] = ys.contains_point(op.y_grid[j]);
  }
  return m;
}

Eigen::MatrixXcd MaskedOperator::masked_matrix() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(op.entries.rows(),
                                                op.entries.cols());
  for (Eigen::Index i = 0; i < op.entries.rows(); i++) {
    if (!x_mask[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index j = 0; j < op.entries.cols(); j++) {
      if (!y_mask[static_cast<std::size_t>(j)]) continue;
      out(i, j) = op.entries(i, j);
    }
  }
  return out;
}

Eigen::MatrixXcd MaskedOperator::masked_submatrix() const {
  std::vector<Eigen::Index> rows, cols;
  for (std::size_t i = 0; i < x_mask.size(); i++) {
    if (x_mask[i]) rows.push_back(static_cast<Eigen::Index>(i));
  }
  for (std::size_t j = 0; j < y_mask.size(); j++) {
    if (y_mask[j]) cols.push_back(static_cast<Eigen::Index>(j));
  }
  Eigen::MatrixXcd sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); i++) {
    for (std::size_t j = 0; j < cols.size(); j++) {
      sub(i, j) = op.entries(rows[i], cols[j]);
    }
  }
  return sub;
}

DecayFit fit_beta(const std::vector<std::pair<double, double>>& points) {
  DecayFit fit;
  fit.points = points;
  std::vector<double> xs, ys;
  for (const auto& [h, n] : points) {
    if (!(h > 0.0)) {
      fail(ErrorKind::invalid_input, "fit_beta", "h must be positive");
    }
    if (n > 0.0) {
      xs.push_back(std::log(h));
      ys.push_back(std::log(n));
    } else {
      fit.n_excluded++;
    }
  }
  const std::size_t n = xs.size();
  if (n < 3) {
    fail(ErrorKind::invalid_input, "fit_beta",
         "need at least 3 points with positive norm");
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; i++) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; i++) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    fail(ErrorKind::invalid_input, "fit_beta", "all h values identical");
  }
  fit.beta = sxy / sxx;
  fit.intercept = my - fit.beta * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; i++) {
    double r = ys[i] - (fit.intercept + fit.beta * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  fit.beta_stderr =
      n > 2 ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

namespace {

// |[lo,hi] cap set| / (hi-lo)
double covered_fraction(const IntervalSet& set, double lo, double hi) {
  double total = 0.0;
  for (const Interval& p : set.parts()) {
    if (p.hi <= lo) continue;
    if (p.lo >= hi) break;
    total += std::min(p.hi, hi) - std::max(p.lo, lo);
  }
  return total / (hi - lo);
}

// Mask set for embedded mode: 2h^rho-neighborhood of the regular set
// produced by the Cantor embedding at alpha0 = h^rho.
IntervalSet embedded_mask_set(const IntervalSet& omega, double nu,
                              double s) {
  CantorTree tree = CantorTree::embed_porous(omega, nu, s);
  int level = std::min(tree.cutoff_k0() + 1, tree.depth());
  IntervalSet cells = tree.kept_cells_as_set(level);
  return neighborhood(cells, 2.0 * s);
}

}  // namespace

FupExperimentResult fup_experiment(const IntervalSet& omega_plus,
                                   const IntervalSet& omega_minus,
                                   double nu, const KernelSpec& spec,
                                   double rho,
                                   const std::vector<double>& h_list,
                                   FupMode mode, const FupOptions& opt) {
  spec.validate();
  if (!(rho > 0.0 && rho < 1.0)) {
    fail(ErrorKind::invalid_input, "fup_experiment", "rho must be in (0,1)");
  }
  for (double h : h_list) {
    if (!(h > 0.0 && h < 1.0)) {
      fail(ErrorKind::invalid_input, "fup_experiment",
           "every h must be in (0,1)");
    }
  }
  if (h_list.empty()) {
    fail(ErrorKind::invalid_input, "fup_experiment", "empty h list");
  }

  struct PerH {
    FupRunRow row;
    std::vector<std::string> warnings;
  };
  auto run_one = [&](std::size_t idx) -> PerH {
    const double h = h_list[idx];
    const double s = std::pow(h, rho);
    PerH out;
    IntervalSet row_set, col_set;
    if (mode == FupMode::Raw) {
      row_set = neighborhood(omega_minus, s);
      col_set = neighborhood(omega_plus, s);
    } else {
      row_set = embedded_mask_set(omega_minus, nu, s);
      col_set = embedded_mask_set(omega_plus, nu, s);
    }

    Grid g = make_grid(spec, h, opt.oversample, opt.dim_cap, true,
                       &out.warnings);
    std::vector<double> xs, ys, wx, wy;
    for (double x : g.x) {
      if (opt.soft_mask_edges) {
        double c = covered_fraction(row_set, x - g.step / 2, x + g.step / 2);
        if (c > 0.0) {
          xs.push_back(x);
          wx.push_back(std::sqrt(c));
        }
      } else if (row_set.contains_point(x)) {
        xs.push_back(x);
        wx.push_back(1.0);
      }
    }
    for (double y : g.y) {
      if (opt.soft_mask_edges) {
        double c = covered_fraction(col_set, y - g.step / 2, y + g.step / 2);
        if (c > 0.0) {
          ys.push_back(y);
          wy.push_back(std::sqrt(c));
        }
      } else if (col_set.contains_point(y)) {
        ys.push_back(y);
        wy.push_back(1.0);
      }
    }
    out.row.h = h;
    out.row.rho = rho;
    out.row.dim = static_cast<int>(std::max(g.x.size(), g.y.size()));
    out.row.dim_x = static_cast<int>(xs.size());
    out.row.dim_y = static_cast<int>(ys.size());
    out.row.oversample = g.oversample_eff;

    const double scale = g.step / std::sqrt(h);
    if (xs.empty() || ys.empty()) {
      out.row.norm_masked = 0.0;
    } else {
      Eigen::MatrixXcd sub(xs.size(), ys.size());
      for (std::size_t i = 0; i < xs.size(); i++) {
        for (std::size_t j = 0; j < ys.size(); j++) {
          double b = wx[i] * wy[j] * spec.amplitude_at(xs[i], ys[j]);
          sub(i, j) = b == 0.0
                          ? std::complex<double>(0.0)
                          : std::polar(scale * b,
                                       spec.phase_at(xs[i], ys[j]) / h);
        }
      }
      out.row.norm_masked =
          operator_norm(sub, opt.norm_tol, opt.seed + idx);
    }

    if (out.row.dim <= opt.unmasked_dim_limit) {
      Eigen::MatrixXcd full(g.x.size(), g.y.size());
      for (std::size_t i = 0; i < g.x.size(); i++) {
        for (std::size_t j = 0; j < g.y.size(); j++) {
          double b = spec.amplitude_at(g.x[i], g.y[j]);
          full(i, j) = b == 0.0
                           ? std::complex<double>(0.0)
                           : std::polar(scale * b,
                                        spec.phase_at(g.x[i], g.y[j]) / h);
        }
      }
      out.row.norm_unmasked =
          operator_norm(full, opt.norm_tol, opt.seed + 7919 * (idx + 1));
    } else {
      out.row.norm_unmasked = std::numeric_limits<double>::quiet_NaN();
      out.warnings.push_back(
          "unmasked norm skipped at h=" + std::to_string(h) +
          " (dimension above limit)");
    }
    return out;
  };

  std::vector<PerH> per_h = parallel_map<PerH>(
      h_list.size(), opt.threads, run_one);

  FupExperimentResult result;
  std::vector<std::pair<double, double>> pts;
  int usable = 0;
  for (auto& p : per_h) {
    result.rows.push_back(p.row);
    pts.push_back({p.row.h, p.row.norm_masked});
    if (p.row.norm_masked > 0.0) usable++;
    for (auto& w : p.warnings) result.warnings.push_back(std::move(w));
  }
  if (usable >= 3) {
    result.fit = fit_beta(pts);
  } else {
    result.fit.points = pts;
    result.fit.beta = std::numeric_limits<double>::quiet_NaN();
    result.fit.intercept = std::numeric_limits<double>::quiet_NaN();
    result.fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    result.warnings.push_back(
        "decay fit skipped: fewer than 3 usable points");
  }
  return result;
}

}  // namespace fuplab
