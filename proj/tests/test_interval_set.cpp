#include <doctest.h>

#include <cmath>

#include "fuplab/common.hpp"
#include "fuplab/interval_set.hpp"
#include "fuplab/json_io.hpp"

using namespace fuplab;

namespace {

IntervalSet make(std::initializer_list<Interval> parts,
                 Interval window = {0.0, 1.0}) {
  return IntervalSet::normalize(std::vector<Interval>(parts), window);
}

// Independent gap oracle: longest run of sample points outside omega,
// on a fine mesh of the query interval. Accuracy ~ 2*mesh.
double naive_gap(const IntervalSet& omega, Interval within, int mesh = 20000) {
  double step = within.length() / mesh;
  double best = 0.0, run_start = within.lo;
  bool in_run = false;
  for (int i = 0; i <= mesh; i++) {
    double x = within.lo + i * step;
    bool free = !omega.contains_point(x);
    if (free && !in_run) {
      in_run = true;
      run_start = x;
    }
    if ((!free || i == mesh) && in_run) {
      double end = free ? x : x - step;
      best = std::max(best, end - run_start);
      in_run = false;
    }
  }
  return best;
}

// Level-n approximation of the middle-thirds Cantor set.
IntervalSet triadic_cantor(int levels) {
  std::vector<Interval> cur = {{0.0, 1.0}};
  for (int k = 0; k < levels; k++) {
    std::vector<Interval> next;
    for (const Interval& iv : cur) {
      double third = iv.length() / 3.0;
      next.push_back({iv.lo, iv.lo + third});
      next.push_back({iv.hi - third, iv.hi});
    }
    cur = std::move(next);
  }
  return IntervalSet::normalize(cur);
}

}  // namespace

TEST_CASE("normalize merges, sorts and clips") {
  auto s = make({{0.0, 0.5}, {0.4, 0.6}});
  REQUIRE(s.parts().size() == 1);
  CHECK(s.parts()[0].lo == doctest::Approx(0.0));
  CHECK(s.parts()[0].hi == doctest::Approx(0.6));

  CHECK(make({}).empty());

  auto clipped = make({{0.9, 1.2}});
  REQUIRE(clipped.parts().size() == 1);
  CHECK(clipped.parts()[0].lo == doctest::Approx(0.9));
  CHECK(clipped.parts()[0].hi == doctest::Approx(1.0));

  CHECK_THROWS_AS(make({{0.0, std::nan("")}}), Error);
  CHECK_THROWS_AS(make({{0.2, 0.1}}), Error);
}

TEST_CASE("neighborhood fattens and clips") {
  auto s = neighborhood(make({{0.5, 0.5}}), 0.1);
  REQUIRE(s.parts().size() == 1);
  CHECK(s.parts()[0].lo == doctest::Approx(0.4));
  CHECK(s.parts()[0].hi == doctest::Approx(0.6));

  auto x = make({{0.1, 0.2}, {0.7, 0.8}});
  auto same = neighborhood(x, 0.0);
  REQUIRE(same.parts().size() == 2);
  CHECK(same.parts()[1].lo == doctest::Approx(0.7));

  auto merged = neighborhood(make({{0.0, 0.1}, {0.15, 0.2}}), 0.03);
  REQUIRE(merged.parts().size() == 1);
  CHECK(merged.parts()[0].lo == doctest::Approx(0.0));
  CHECK(merged.parts()[0].hi == doctest::Approx(0.23));

  CHECK_THROWS_AS(neighborhood(x, -0.1), Error);
}

TEST_CASE("neighborhood composition dominates the sum of radii") {
  Rng rng(7);
  for (int trial = 0; trial < 50; trial++) {
    std::vector<Interval> parts;
    int n = 1 + int(rng.next_below(4));
    for (int i = 0; i < n; i++) {
      double lo = rng.next_double();
      parts.push_back({lo, std::min(1.0, lo + 0.2 * rng.next_double())});
    }
    auto x = IntervalSet::normalize(parts);
    double s = 0.05 * rng.next_double(), t = 0.05 * rng.next_double();
    auto twice = neighborhood(neighborhood(x, s), t);
    auto once = neighborhood(x, s + t);
    CHECK(once.covered_by(twice, 1e-12));
  }
}

TEST_CASE("largest_gap basics") {
  auto omega = make({{0.0, 0.1}, {0.9, 1.0}});
  auto [j, len] = largest_gap(omega, {0.0, 1.0});
  CHECK(len == doctest::Approx(0.8));
  CHECK(j.lo == doctest::Approx(0.1));
  CHECK(j.hi == doctest::Approx(0.9));

  auto [j2, len2] = largest_gap(make({}), {0.2, 0.7});
  CHECK(len2 == doctest::Approx(0.5));
  CHECK(j2.lo == doctest::Approx(0.2));

  auto [j3, len3] = largest_gap(make({{0.0, 1.0}}), {0.3, 0.6});
  (void)j3;
  CHECK(len3 == 0.0);
}

TEST_CASE("largest_gap ties break leftmost and points split gaps") {
  auto omega = make({{0.45, 0.45}});
  auto [j, len] = largest_gap(omega, {0.0, 0.9});
  CHECK(len == doctest::Approx(0.45));
  CHECK(j.lo == doctest::Approx(0.0));  // [0,0.45] before [0.45,0.9]
}

TEST_CASE("largest_gap agrees with the sampling oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 40; trial++) {
    std::vector<Interval> parts;
    int n = int(rng.next_below(5));
    for (int i = 0; i < n; i++) {
      double lo = rng.next_double();
      parts.push_back({lo, std::min(1.0, lo + 0.3 * rng.next_double())});
    }
    auto omega = IntervalSet::normalize(parts);
    auto [j, len] = largest_gap(omega, {0.0, 1.0});
    (void)j;
    CHECK(len == doctest::Approx(naive_gap(omega, {0.0, 1.0})).epsilon(2e-3));
  }
}

TEST_CASE("largest_gap is monotone under growing omega") {
  Rng rng(13);
  for (int trial = 0; trial < 30; trial++) {
    std::vector<Interval> parts;
    for (int i = 0; i < 3; i++) {
      double lo = rng.next_double();
      parts.push_back({lo, std::min(1.0, lo + 0.2 * rng.next_double())});
    }
    auto small = IntervalSet::normalize(
        std::vector<Interval>(parts.begin(), parts.begin() + 2));
    auto big = IntervalSet::normalize(parts);
    auto [ja, la] = largest_gap(small, {0.0, 1.0});
    auto [jb, lb] = largest_gap(big, {0.0, 1.0});
    (void)ja;
    (void)jb;
    CHECK(lb <= la + 1e-12);
  }
}

TEST_CASE("porosity_check on the two-block set") {
  auto omega = make({{0.0, 0.1}, {0.9, 1.0}});

  auto ok = porosity_check(omega, 0.4, 0.5, 1.0);
  CHECK(ok.certified);
  CHECK(ok.nu_certified == doctest::Approx(0.1));
  CHECK(!ok.witness.has_value());

  auto bad = porosity_check(omega, 0.4, 0.05, 1.0);
  CHECK(!bad.certified);
  REQUIRE(bad.witness.has_value());
  auto [jw, lw] = largest_gap(omega, *bad.witness);
  (void)jw;
  CHECK(lw < 0.4 * bad.witness->length());

  CHECK_THROWS_AS(porosity_check(omega, 0.4, 0.5, 0.1), Error);
  CHECK_THROWS_AS(porosity_check(omega, 1.5, 0.1, 1.0), Error);
}

TEST_CASE("porosity_check on the triadic Cantor approximation") {
  auto cantor = triadic_cantor(8);
  double a0 = std::pow(3.0, -8);
  CHECK(porosity_check(cantor, 0.05, a0, 1.0).certified);

  auto coarse = porosity_check(cantor, 0.4, a0, 1.0);
  CHECK(!coarse.certified);
  REQUIRE(coarse.witness.has_value());
  CHECK(coarse.witness->lo == doctest::Approx(0.0));
  CHECK(coarse.witness->hi == doctest::Approx(1.0));
}

TEST_CASE("porosity invariants") {
  // empty set is certified at every nu and scale range
  for (double nu : {0.1, 0.5, 0.9}) {
    CHECK(porosity_check(make({}), nu, 1e-3, 1.0).certified);
  }
  // a set containing an interval of length >= alpha0 always fails
  auto solid = make({{0.3, 0.5}});
  for (double nu : {0.05, 0.3}) {
    auto rep = porosity_check(solid, nu, 0.05, 1.0);
    CHECK(!rep.certified);
    REQUIRE(rep.witness.has_value());
  }
  // certification is monotone: restrict scales, keep nu
  auto omega = make({{0.0, 0.1}, {0.9, 1.0}});
  auto wide = porosity_check(omega, 0.4, 0.5, 1.0);
  auto narrow = porosity_check(omega, 0.4, 0.6, 1.0);
  CHECK(wide.certified);
  CHECK(narrow.certified);
}

TEST_CASE("random_porous is deterministic and certified") {
  auto a = random_porous(0.2, std::pow(2.0, -10), 1);
  auto b = random_porous(0.2, std::pow(2.0, -10), 1);
  REQUIRE(a.parts().size() == b.parts().size());
  for (std::size_t i = 0; i < a.parts().size(); i++) {
    CHECK(a.parts()[i].lo == b.parts()[i].lo);
    CHECK(a.parts()[i].hi == b.parts()[i].hi);
  }
  CHECK(porosity_check(a, 0.2, std::pow(2.0, -10), 1.0).certified);

  auto c = random_porous(1.0 / 3.0, std::pow(2.0, -4), 7);
  CHECK(!c.empty());
  CHECK(porosity_check(c, 1.0 / 3.0, std::pow(2.0, -4), 1.0).certified);

  CHECK_THROWS_AS(random_porous(0.5, 0.01, 1), Error);
}

TEST_CASE("random_porous across seeds and nu values") {
  for (std::uint64_t seed = 0; seed < 10; seed++) {
    for (double nu : {0.05, 0.1, 0.25, 1.0 / 3.0}) {
      auto s = random_porous(nu, std::pow(2.0, -12), seed);
      CHECK(porosity_check(s, nu, std::pow(2.0, -12), 1.0).certified);
    }
  }
}

TEST_CASE("neighborhood is monotone in s") {
  auto x = make({{0.2, 0.3}, {0.6, 0.62}});
  auto small_nb = neighborhood(x, 0.01);
  auto big_nb = neighborhood(x, 0.05);
  CHECK(x.covered_by(small_nb, 1e-15));
  CHECK(small_nb.covered_by(big_nb, 1e-15));
}

TEST_CASE("interval set json round trip keeps exact values") {
  auto x = make({{0.1234567890123456, 0.3}, {0.65, 0.9000000000000001}});
  Json j = interval_set_to_json(x);
  auto back = interval_set_from_json(Json::parse(j.dump()));
  REQUIRE(back.parts().size() == x.parts().size());
  for (std::size_t i = 0; i < x.parts().size(); i++) {
    CHECK(back.parts()[i].lo == x.parts()[i].lo);
    CHECK(back.parts()[i].hi == x.parts()[i].hi);
  }
  CHECK_THROWS_AS(interval_set_from_json(Json::parse("{\"parts\": 3}")),
                  Error);
}

TEST_CASE("certification survives shrinking nu and the scale range") {
  for (std::uint64_t seed = 0; seed < 5; seed++) {
    double a0 = std::pow(2.0, -10);
    auto omega = random_porous(0.25, a0, seed);
    auto base = porosity_check(omega, 0.25, a0, 1.0);
    REQUIRE(base.certified);
    CHECK(porosity_check(omega, base.nu_certified, a0, 1.0).certified);
    CHECK(porosity_check(omega, base.nu_certified, 8 * a0, 0.5).certified);
  }
}
