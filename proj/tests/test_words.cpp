#include <doctest.h>

#include <cmath>

#include "fuplab/common.hpp"
#include "fuplab/words.hpp"

using namespace fuplab;

TEST_CASE("density counts exactly") {
  CHECK(density(Word::from_string("222222222222")).ones == 0);
  CHECK(density(Word::from_string("111111111111")).value() == 1.0);
  // ones at positions 0,1,4,8
  auto d = density(Word::from_string("112212221222"));
  CHECK(d.ones == 4);
  CHECK(d.length == 12);
  CHECK_THROWS_AS(density(Word{}), Error);
}

TEST_CASE("density flips with the letters") {
  Rng rng(5);
  for (int t = 0; t < 100; t++) {
    Word w;
    int n = 1 + int(rng.next_below(30));
    for (int i = 0; i < n; i++) {
      w.letters.push_back(rng.next_u64() & 1 ? 1 : 2);
    }
    auto d = density(w);
    auto df = density(w.flipped());
    CHECK(d.ones + df.ones == d.length);
  }
}

TEST_CASE("controlled_set_size matches the enumeration oracle") {
  CHECK(controlled_set_size(12, 0.25) == 79);
  CHECK(controlled_set_size(12, 0.25) ==
        BigInt(1) + 12 + 66);  // C(12,0)+C(12,1)+C(12,2)
  CHECK(controlled_set_size(12, 1e-9) == 1);
  CHECK(controlled_set_size(12, 0.999) == 4095);

  for (int n0 : {1, 2, 3, 5, 8, 12, 16}) {
    for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      CHECK(controlled_set_size(n0, alpha) ==
            controlled_set_size_exhaustive(n0, alpha));
    }
  }
  CHECK_THROWS_AS(controlled_set_size(0, 0.5), Error);
  CHECK_THROWS_AS(controlled_set_size_exhaustive(70, 0.5), Error);

  // verification refusal above N0 = 64 still returns the closed form
  PartitionParams big;
  big.n0 = 80;
  big.alpha = 0.25;
  big.h = 0.5;
  auto rep = count_x(big, true);
  CHECK(!rep.verify_refused.empty());
  CHECK(!rep.verified_exhaustively);
  CHECK(rep.n_uncontrolled > 0);
}

TEST_CASE("controlled_set_size is monotone in alpha") {
  for (int n0 : {6, 11}) {
    BigInt prev = 0;
    for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
      BigInt cur = controlled_set_size(n0, alpha);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("count_x and the proof-chain bounds") {
  PartitionParams p;
  p.n0 = 12;
  p.alpha = 0.25;
  p.h = std::exp(-48.0);  // N0 = ceil(log(1/h)/4) = 12 at rho = 1... unused
  auto rep = count_x(p, true);
  CHECK(rep.n_uncontrolled == 79);
  BigInt expect = 1;
  for (int i = 0; i < 8; i++) expect *= 79;
  CHECK(rep.n_x == expect);
  CHECK(rep.verified_exhaustively);

  // the padded-set bound from the counting lemma: 79 <= C(12,3) * 2^3
  CHECK(rep.stirling_bound == BigInt(220) * 8);
  CHECK(rep.within_stirling);

  // degenerate alpha: only the all-2 block stays uncontrolled
  PartitionParams q;
  q.n0 = 12;
  q.alpha = 1.0 / 24.0;  // alpha = 1/(2 N0)
  q.h = 0.5;
  auto rep2 = count_x(q);
  CHECK(rep2.n_uncontrolled == 1);
  CHECK(rep2.n_x == 1);
}

TEST_CASE("binomial bound holds across a parameter grid") {
  for (int n0 : {4, 7, 10, 13, 16, 24, 40}) {
    for (double alpha : {0.05, 0.1, 0.25, 0.4, 0.5, 0.75}) {
      BigInt n_unc = controlled_set_size(n0, alpha);
      int m = int(std::floor(alpha * n0));
      BigInt bound = binomial(n0, m) * (BigInt(1) << m);
      CHECK(n_unc <= bound);
    }
  }
}

TEST_CASE("entropy-sqrt inequality on the derived alpha range") {
  // -(a log a + (1-a) log(1-a)) <= sqrt(a) holds for a <= ~0.088 (it
  // fails mid-range, e.g. a = 0.2); alpha = beta^2/64 with beta <= 1/8
  // stays below 2.5e-4, far inside the valid range.
  for (double beta = 0.001; beta <= 0.125; beta += 0.001) {
    double a = beta * beta / 64.0;
    double entropy = -(a * std::log(a) + (1 - a) * std::log(1 - a));
    CHECK(entropy <= std::sqrt(a));
  }
  // boundary scan of the small range the proof actually uses
  for (double a = 1e-8; a <= 0.085; a *= 1.6) {
    double entropy = -(a * std::log(a) + (1 - a) * std::log(1 - a));
    CHECK(entropy <= std::sqrt(a));
  }
}

TEST_CASE("xy_membership splits into 8 blocks") {
  Word all2;
  all2.letters.assign(32, 2);
  auto r = xy_membership(all2, 0.3);
  CHECK(r.cls == XYClass::X);

  Word first_block_ones = all2;
  for (int i = 0; i < 4; i++) first_block_ones.letters[i] = 1;
  auto r2 = xy_membership(first_block_ones, 0.3);
  CHECK(r2.cls == XYClass::Y);
  CHECK(r2.block == 1);

  // 8 blocks of density 1/4 with alpha = 0.5 stay uncontrolled
  Word w = Word::from_string(
      "22212221222122212221222122212221");
  auto r3 = xy_membership(w, 0.5);
  CHECK(r3.cls == XYClass::X);

  Word bad;
  bad.letters.assign(13, 2);
  CHECK_THROWS_AS(xy_membership(bad, 0.3), Error);
}

TEST_CASE("partition exactness for tiny N0") {
  for (int n0 : {1, 2}) {
    const int len = 8 * n0;
    std::uint64_t n_x = 0, n_y = 0;
    for (std::uint64_t bits = 0; bits < (1ULL << len); bits++) {
      Word w;
      for (int i = 0; i < len; i++) {
        w.letters.push_back((bits >> i) & 1 ? 1 : 2);
      }
      auto r = xy_membership(w, 0.6);
      (r.cls == XYClass::X ? n_x : n_y)++;
    }
    CHECK(n_x + n_y == (1ULL << len));
    BigInt per_level = controlled_set_size(n0, 0.6);
    BigInt expect_x = 1;
    for (int i = 0; i < 8; i++) expect_x *= per_level;
    CHECK(BigInt(n_x) == expect_x);
  }
}

TEST_CASE("derive_params follows the Ehrenfest-time formulas") {
  auto p = derive_params(std::exp(-20.0), 0.8, 0.1);
  CHECK(p.n0 == 4);
  CHECK(p.n1 == 16);

  CHECK_THROWS_AS(derive_params(std::exp(-20.0), 0.8, 0.4), Error);

  auto q = derive_params(0.5, 0.9, 0.08);
  CHECK(q.alpha == doctest::Approx(0.0001));

  CHECK_THROWS_AS(derive_params(1.5, 0.8, 0.1), Error);
  CHECK_THROWS_AS(derive_params(0.5, 1.2, 0.1), Error);
}

TEST_CASE("asymptotic-bound comparison is reported") {
  auto p = derive_params(std::exp(-40.0), 0.9, 0.125);
  auto rep = count_x(p);
  CHECK(rep.asymptotic_bound == doctest::Approx(
      std::pow(p.h, -4.0 * std::sqrt(p.alpha))));
  CHECK(rep.ratio_vs_asymptotic > 0.0);
}
