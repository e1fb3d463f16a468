#include "fuplab/words.hpp"

#include <bit>
#include <cmath>

#include "fuplab/common.hpp"

namespace fuplab {

Word Word::from_string(const std::string& s) {
  Word w;
  w.letters.reserve(s.size());
  for (char c : s) {
    if (c == '1' || c == '2') {
      w.letters.push_back(static_cast<std::uint8_t>(c - '0'));
    } else {
      fail(ErrorKind::invalid_input, "word", "letters must be 1 or 2");
    }
  }
  return w;
}

Word Word::flipped() const {
  Word w;
  w.letters.reserve(letters.size());
  for (auto c : letters) w.letters.push_back(c == 1 ? 2 : 1);
  return w;
}

Density density(const Word& w) {
  if (w.letters.empty()) {
    fail(ErrorKind::invalid_input, "density", "empty word");
  }
  Density d;
  d.length = w.letters.size();
  for (auto c : w.letters) {
    if (c != 1 && c != 2) {
      fail(ErrorKind::invalid_input, "density", "letters must be 1 or 2");
    }
    if (c == 1) d.ones++;
  }
  return d;
}

bool is_controlled(std::uint64_t ones, std::uint64_t n, double alpha) {
  return static_cast<double>(ones) >= alpha * static_cast<double>(n);
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; i++) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

BigInt controlled_set_size(int n0, double alpha) {
  if (n0 < 1) {
    fail(ErrorKind::invalid_input, "controlled_set_size", "N0 >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorKind::invalid_input, "controlled_set_size",
         "alpha must be in (0,1)");
  }
  BigInt sum = 0;
  for (int j = 0; j <= n0; j++) {
    if (is_controlled(j, n0, alpha)) break;  // densities increase with j
    sum += binomial(n0, j);
  }
  return sum;
}

BigInt controlled_set_size_exhaustive(int n0, double alpha) {
  if (n0 < 1) {
    fail(ErrorKind::invalid_input, "controlled_set_size", "N0 >= 1");
  }
  if (n0 > 64) {
    fail(ErrorKind::resource, "controlled_set_size",
         "exhaustive enumeration limited to N0 <= 64");
  }
  BigInt count = 0;
  const std::uint64_t total = (n0 == 64) ? 0 : (1ULL << n0);
  std::uint64_t b = 0;
  do {
    std::uint64_t ones = static_cast<std::uint64_t>(std::popcount(b));
    if (!is_controlled(ones, n0, alpha)) count++;
    b++;
  } while (b != total);
  return count;
}

PartitionParams derive_params(double h, double rho, double beta) {
  if (!(h > 0.0 && h < 1.0)) {
    fail(ErrorKind::invalid_input, "derive_params", "h must be in (0,1)");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    fail(ErrorKind::invalid_input, "derive_params", "rho must be in (0,1)");
  }
  if (!(beta > 0.0 && beta <= 0.125)) {
    fail(ErrorKind::invalid_input, "derive_params",
         "beta must be in (0, 1/8]");
  }
  PartitionParams p;
  p.h = h;
  p.rho = rho;
  p.beta = beta;
  p.alpha = beta * beta / 64.0;
  // tolerance guards the ceil against float noise at exact integers
  double x = (rho / 4.0) * std::log(1.0 / h);
  p.n0 = static_cast<int>(std::ceil(x - 1e-9));
  if (p.n0 < 1) p.n0 = 1;
  p.n1 = 4 * p.n0;
  return p;
}

CountReport count_x(const PartitionParams& params, bool verify_exhaustive) {
  const int n0 = params.n0;
  const double alpha = params.alpha;
  if (n0 < 1 || !(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorKind::invalid_input, "count_x", "bad partition parameters");
  }
  CountReport rep;
  rep.n_uncontrolled = controlled_set_size(n0, alpha);
  rep.n_x = 1;
  for (int i = 0; i < 8; i++) rep.n_x *= rep.n_uncontrolled;

  const int m = static_cast<int>(std::floor(alpha * n0));
  rep.stirling_bound = binomial(n0, m) * (BigInt(1) << m);
  rep.stirling_bound_pow8 = 1;
  for (int i = 0; i < 8; i++) rep.stirling_bound_pow8 *= rep.stirling_bound;
  rep.within_stirling = rep.n_uncontrolled <= rep.stirling_bound;

  if (params.h > 0.0 && params.h < 1.0) {
    rep.asymptotic_bound =
        std::pow(params.h, -4.0 * std::sqrt(alpha));
    rep.ratio_vs_asymptotic =
        rep.n_x.convert_to<double>() / rep.asymptotic_bound;
  }

  if (verify_exhaustive) {
    if (n0 > 64) {
      rep.verify_refused =
          "count_x: exhaustive verification limited to N0 <= 64";
    } else {
      BigInt brute = controlled_set_size_exhaustive(n0, alpha);
      if (brute != rep.n_uncontrolled) {
        fail(ErrorKind::numeric, "count_x",
             "closed form disagrees with enumeration");
      }
      rep.verified_exhaustively = true;
    }
  }
  return rep;
}

XYResult xy_membership(const Word& w, double alpha) {
  if (w.letters.empty() || w.letters.size() % 8 != 0) {
    fail(ErrorKind::invalid_input, "xy_membership",
         "word length must be a positive multiple of 8");
  }
  const std::size_t n0 = w.letters.size() / 8;
  for (int block = 0; block < 8; block++) {
    std::uint64_t ones = 0;
    for (std::size_t i = 0; i < n0; i++) {
      if (w.letters[block * n0 + i] == 1) ones++;
    }
    if (is_controlled(ones, n0, alpha)) {
      return {XYClass::Y, block + 1};
    }
  }
  return {XYClass::X, 0};
}

}  // namespace fuplab
