#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace fuplab {

using BigInt = boost::multiprecision::cpp_int;

// Sequence over the alphabet {1,2}.
struct Word {
  std::vector<std::uint8_t> letters;

  static Word from_string(const std::string& s);
  std::size_t length() const { return letters.size(); }
  Word flipped() const;  // swap letters 1 <-> 2
};

// Fraction of 1-letters, as an exact rational ones/length.
struct Density {
  std::uint64_t ones = 0;
  std::uint64_t length = 0;
  double value() const {
    return static_cast<double>(ones) / static_cast<double>(length);
  }
};

Density density(const Word& w);

// A word is controlled when its density is >= alpha (closed threshold);
// the same predicate everywhere keeps counting and membership consistent.
bool is_controlled(std::uint64_t ones, std::uint64_t n, double alpha);

// #(W(N0) \ Z): number of length-N0 words of density strictly below
// alpha, as an exact big integer.
BigInt controlled_set_size(int n0, double alpha);

// Same count by brute-force enumeration of all 2^N0 words. Test oracle;
// refuses n0 > 64 (and is only practical well below that).
BigInt controlled_set_size_exhaustive(int n0, double alpha);

BigInt binomial(int n, int k);

struct PartitionParams {
  double h = 0.0;
  double rho = 0.0;
  int n0 = 0;
  int n1 = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

// N0 = ceil((rho/4) log(1/h)), N1 = 4 N0, alpha = beta^2/64.
// Requires h, rho in (0,1) and beta in (0, 1/8].
PartitionParams derive_params(double h, double rho, double beta);

struct CountReport {
  BigInt n_uncontrolled;      // #(W(N0) \ Z)
  BigInt n_x;                 // n_uncontrolled^8
  BigInt stirling_bound;      // per-level binom(N0, floor(a N0)) 2^floor(a N0)
  BigInt stirling_bound_pow8; // the same bound raised to the 8th power
  double asymptotic_bound = 0.0;   // h^(-4 sqrt(alpha))
  double ratio_vs_asymptotic = 0.0;        // n_x / asymptotic_bound
  bool within_stirling = false;       // n_uncontrolled <= stirling_bound
  bool verified_exhaustively = false; // enumeration cross-check ran
  // set when verification was requested but refused (N0 too large); the
  // closed-form counts above are still valid
  std::string verify_refused;
};

// Counts the uncontrolled block set and the product set X of 8 blocks.
// With verify_exhaustive set, cross-checks against enumeration (resource
// error for n0 > 64). h in params feeds the h^(-4 sqrt(alpha)) comparison.
CountReport count_x(const PartitionParams& params,
                    bool verify_exhaustive = false);

enum class XYClass { X, Y };

struct XYResult {
  XYClass cls = XYClass::X;
  int block = 0;  // 1-based index of the first controlled block, for Y
};

// Splits a word of length 8*N0 into 8 blocks and classifies: Y if some
// block is controlled (smallest such block reported), X otherwise.
XYResult xy_membership(const Word& w, double alpha);

}  // namespace fuplab
