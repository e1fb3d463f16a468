#include <doctest.h>

#include <cmath>

#include "fuplab/common.hpp"
#include "fuplab/flows.hpp"
#include "fuplab/json_io.hpp"
#include "fuplab/witness.hpp"

using namespace fuplab;

namespace {

UnitTangentPoint seeded_point(const FuchsianGroup& g, Rng rng) {
  MoebiusElement m = geodesic_element(rng.uniform(-1.5, 1.5)) *
                     stable_element(rng.uniform(-1.0, 1.0)) *
                     unstable_element(rng.uniform(-1.0, 1.0));
  return {reduce(m, g), 1.0};
}

}  // namespace

TEST_CASE("geodesic conjugation of both unipotents") {
  Rng rng(31);
  for (int t_i = 0; t_i < 1000; t_i++) {
    double t = rng.uniform(-3.0, 3.0);
    double s = rng.uniform(-2.0, 2.0);
    MoebiusElement at = geodesic_element(t);
    MoebiusElement at_inv = geodesic_element(-t);
    // a_t n-_s a_-t = n-_{e^-t s}
    MoebiusElement lhs = at * unstable_element(s) * at_inv;
    MoebiusElement rhs = unstable_element(std::exp(-t) * s);
    CHECK(frobenius_distance(lhs, rhs) < 1e-12 * (1.0 + rhs.frobenius_norm()));
    // a_t n+_s a_-t = n+_{e^t s}
    MoebiusElement lhs2 = at * stable_element(s) * at_inv;
    MoebiusElement rhs2 = stable_element(std::exp(t) * s);
    CHECK(frobenius_distance(lhs2, rhs2) <
          1e-12 * (1.0 + rhs2.frobenius_norm()));
  }
}

TEST_CASE("conjugation arithmetic at t = log 2") {
  // a_t n-_s = n-_{s'} a_t with s' = 0.15 for s = 0.3
  double t = std::log(2.0);
  MoebiusElement lhs = geodesic_element(t) * unstable_element(0.3);
  MoebiusElement rhs = unstable_element(0.15) * geodesic_element(t);
  CHECK(frobenius_distance(lhs, rhs) < 1e-14);
  // a_t n+_s = n+_{s'} a_t with s' = 0.6
  MoebiusElement lhs2 = geodesic_element(t) * stable_element(0.3);
  MoebiusElement rhs2 = stable_element(0.6) * geodesic_element(t);
  CHECK(frobenius_distance(lhs2, rhs2) < 1e-14);
}

TEST_CASE("flows compose and invert") {
  auto g = FuchsianGroup::bolza();
  Rng rng(5);
  for (int i = 0; i < 20; i++) {
    auto p = seeded_point(g, rng.split(i));
    auto same = geodesic_flow(g, p, 0.0);
    CHECK(frobenius_distance(same.rep, p.rep) < 1e-12);

    double t = rng.uniform(-2.0, 2.0);
    auto fwd_back = geodesic_flow(g, geodesic_flow(g, p, t), -t);
    CHECK(frobenius_distance(fwd_back.rep, p.rep) < 1e-10);

    double t1 = rng.uniform(-1.5, 1.5), t2 = rng.uniform(-1.5, 1.5);
    auto split_flow = geodesic_flow(g, geodesic_flow(g, p, t1), t2);
    auto joint = geodesic_flow(g, p, t1 + t2);
    CHECK(frobenius_distance(split_flow.rep, joint.rep) < 1e-10);

    auto h0 = horocycle_flow(g, p, 0.0, Direction::Stable);
    CHECK(frobenius_distance(h0.rep, p.rep) < 1e-12);
  }
}

TEST_CASE("unstable direction expands under the forward flow") {
  // phi_t(e^{s U-} p) = e^{e^t s U-}(phi_t p), reduction included
  auto g = FuchsianGroup::bolza();
  Rng rng(8);
  for (int i = 0; i < 30; i++) {
    auto p = seeded_point(g, rng.split(i));
    double t = rng.uniform(0.0, 2.0);
    double s = rng.uniform(-0.5, 0.5);
    auto a = geodesic_flow(g, horocycle_flow(g, p, s, Direction::Unstable), t);
    auto b = horocycle_flow(g, geodesic_flow(g, p, t), std::exp(t) * s,
                            Direction::Unstable);
    CHECK(frobenius_distance(a.rep, b.rep) < 1e-9);
  }
}

TEST_CASE("bolza group passes its structural checks") {
  auto g = FuchsianGroup::bolza();
  CHECK(g.generators.size() == 8);
  REQUIRE(g.relation_products.size() == 1);
  CHECK(g.relation_residual(g.relation_products[0]) < 1e-9);
  double tr_expect = 2.0 * (1.0 + std::sqrt(2.0));
  for (int k = 0; k < 8; k++) {
    const auto& m = g.generators[k];
    CHECK(std::fabs(m.det() - 1.0) < 1e-12);
    CHECK(std::fabs(std::fabs(m.a + m.d) - tr_expect) < 1e-12);  // hyperbolic
  }
}

TEST_CASE("reduce is idempotent and undoes deck moves") {
  auto g = FuchsianGroup::bolza();
  auto id = reduce(MoebiusElement::identity(), g);
  CHECK(frobenius_distance(id, MoebiusElement::identity()) < 1e-12);

  Rng rng(12);
  for (int i = 0; i < 30; i++) {
    auto p = seeded_point(g, rng.split(i));
    auto again = reduce(p.rep, g);
    CHECK(frobenius_distance(again, p.rep) < 1e-12);

    const auto& gamma = g.generators[rng.next_below(8)];
    auto moved = reduce(gamma * p.rep, g);
    CHECK(frobenius_distance(moved, p.rep) < 1e-9);
  }
}

TEST_CASE("determinants stay pinned through long orbits") {
  auto g = FuchsianGroup::bolza();
  auto p = UnitTangentPoint::base();
  Rng rng(3);
  for (int i = 0; i < 1000; i++) {
    switch (rng.next_below(3)) {
      case 0: p = geodesic_flow(g, p, rng.uniform(-0.5, 0.5)); break;
      case 1: p = horocycle_flow(g, p, rng.uniform(-0.5, 0.5),
                                 Direction::Stable); break;
      default: p = horocycle_flow(g, p, rng.uniform(-0.5, 0.5),
                                  Direction::Unstable); break;
    }
  }
  CHECK(std::fabs(p.rep.det() - 1.0) < 1e-12);
}

TEST_CASE("observables are group invariant by reduction") {
  auto g = FuchsianGroup::bolza();
  auto f = bump_observable(g, {0.0, 1.0}, 2.8);
  Rng rng(21);
  for (int i = 0; i < 50; i++) {
    auto p = seeded_point(g, rng.split(i));
    double v = f(p);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    const auto& gamma = g.generators[rng.next_below(8)];
    CHECK(f({gamma * p.rep, 1.0}) == doctest::Approx(v).epsilon(1e-10));
  }
}

TEST_CASE("horocycle averages of constants are exact") {
  auto g = FuchsianGroup::bolza();
  auto p = seeded_point(g, Rng(77));
  CHECK(horocycle_average(g, constant_observable(1.0), p, 50.0, 500) ==
        doctest::Approx(1.0));
  CHECK(horocycle_average(g, constant_observable(-2.5), p, 50.0, 500) ==
        doctest::Approx(-2.5));
  CHECK_THROWS_AS(horocycle_average(g, constant_observable(1.0), p, -1.0, 10),
                  Error);
}

TEST_CASE("liouville MC basics") {
  auto g = FuchsianGroup::bolza();
  auto one = liouville_average(g, constant_observable(1.0), 2000, 9);
  CHECK(one.value == doctest::Approx(1.0));
  CHECK(one.std_error == doctest::Approx(0.0));

  auto f = bump_observable(g, {0.0, 1.0}, 2.8);
  auto est = liouville_average(g, f, 5000, 10);
  CHECK(est.value >= 0.0);
  CHECK(est.std_error > 0.0);

  // determinism in the seed
  auto est2 = liouville_average(g, f, 5000, 10);
  CHECK(est2.value == est.value);

  // standard error shrinks like sqrt(n): quadrupling halves it
  double se1 = 0.0, se4 = 0.0;
  for (std::uint64_t s = 0; s < 6; s++) {
    se1 += liouville_average(g, f, 4000, 100 + s).std_error;
    se4 += liouville_average(g, f, 16000, 200 + s).std_error;
  }
  CHECK(se1 / se4 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("horocycle average approaches the Liouville value") {
  auto g = FuchsianGroup::bolza();
  auto f = bump_observable(g, {0.0, 1.0}, 2.8);
  auto mc = liouville_average(g, f, 100000, 4242);
  auto p = seeded_point(g, Rng(31));
  double avg = horocycle_average(g, f, p, 100.0, 12000);
  CHECK(std::fabs(avg - mc.value) < 0.05);
}

TEST_CASE("hitting time finds the ball") {
  auto g = FuchsianGroup::bolza();
  auto base = UnitTangentPoint::base();
  // already inside
  auto s0 = hitting_time(g, {base, 0.5}, base, 10.0, Direction::Unstable);
  REQUIRE(s0.has_value());
  CHECK(*s0 == 0.0);

  // a ball as wide as the fundamental domain catches everything fast
  Rng rng(41);
  for (int i = 0; i < 10; i++) {
    auto p = seeded_point(g, rng.split(i));
    auto s = hitting_time(g, {base, 3.5}, p, 10.0, Direction::Unstable);
    REQUIRE(s.has_value());
    CHECK(*s <= 0.9);
  }

  // seeded sweep: all hit a radius-0.5 ball within a finite horizon
  int hits = 0;
  for (int i = 0; i < 25; i++) {
    auto p = seeded_point(g, rng.split(100 + i));
    auto s = hitting_time(g, {base, 0.5}, p, 400.0, Direction::Unstable);
    if (s.has_value()) hits++;
  }
  CHECK(hits == 25);
}

TEST_CASE("witness j arithmetic follows the scale inequality") {
  auto g = FuchsianGroup::bolza();
  std::vector<WitnessTarget> targets = {
      {UnitTangentPoint::base(), 0.5, 0.9},
      {geodesic_flow(g, UnitTangentPoint::base(), 1.2), 0.5, 0.9}};
  SliceSpec slice;
  slice.nu1 = 0.01;
  slice.n_samples = 2;

  auto rec = porosity_witness(g, targets, 1, UnitTangentPoint::base(), 1.0,
                              1.0, slice);
  CHECK(rec.j == 0);
  CHECK(rec.hit_found);
  CHECK(rec.s0 == doctest::Approx(rec.s_w));

  auto rec2 = porosity_witness(g, targets, 2,
                               seeded_point(g, Rng(51)), 0.3, 2.0, slice);
  CHECK(rec2.j == 2);  // e^1 * 0.3 < 2 <= e^2 * 0.3
  if (rec2.hit_found) {
    CHECK(rec2.s0 >= 0.0);
    CHECK(rec2.s0 <= 0.3);
  }

  CHECK_THROWS_AS(porosity_witness(g, targets, 3, UnitTangentPoint::base(),
                                   0.5, 1.0, slice),
                  Error);
  CHECK_THROWS_AS(porosity_witness(g, targets, 1, UnitTangentPoint::base(),
                                   1e-9, 1.0, slice),
                  Error);
}

TEST_CASE("slice pushforward contracts the stable coordinate by e^-j") {
  // matrix identity underlying the slice transport: conjugating the
  // stable factor by a_j scales v3 exactly by e^-j
  Rng rng(61);
  for (int i = 0; i < 50; i++) {
    double j = double(1 + rng.next_below(5));
    double v1 = rng.uniform(-0.2, 0.2);
    double v3 = rng.uniform(-0.2, 0.2);
    MoebiusElement lhs = stable_combo_element(v1, v3) * geodesic_element(j);
    MoebiusElement rhs =
        geodesic_element(j) * stable_combo_element(v1, std::exp(-j) * v3);
    CHECK(frobenius_distance(lhs, rhs) < 1e-12 * rhs.frobenius_norm());
  }
}

TEST_CASE("witness pipeline verifies on the bolza preset") {
  auto g = FuchsianGroup::bolza();
  std::vector<WitnessTarget> targets = {
      {UnitTangentPoint::base(), 0.2, 0.3},
      {geodesic_flow(g, UnitTangentPoint::base(), 1.2), 0.2, 0.3}};
  SliceSpec slice;
  slice.nu1 = 0.0075;
  slice.n_samples = 3;
  const double T = 1500.0;
  Rng rng(71);
  int verified = 0, total = 0;
  for (int i = 0; i < 4; i++) {
    auto p = seeded_point(g, rng.split(i));
    for (double tau : {1.0, 0.5}) {
      auto rec = porosity_witness(g, targets, 1 + int(i % 2), p, tau, T,
                                  slice);
      total++;
      if (rec.verified) {
        verified++;
        CHECK(rec.s0 >= 0.0);
        CHECK(rec.s0 <= tau);
        CHECK(rec.max_push_distance <= 0.3);
        CHECK(std::exp(rec.j - 1.0) * tau < T);
        CHECK(T <= std::exp(double(rec.j)) * tau);
      }
    }
  }
  CHECK(verified >= total - 1);
}

TEST_CASE("group json loading") {
  auto g = group_from_json(Json{{"preset", "bolza"}});
  CHECK(g.preset_name == "bolza");
  CHECK(g.generators.size() == 8);

  Json j = group_to_json(g);
  CHECK(j.at("preset") == "bolza");

  // explicit generators: a hyperbolic cyclic group
  Json custom;
  custom["generators"] = {{2.0, 0.0, 0.0, 0.5}};
  auto cyc = group_from_json(custom);
  CHECK(cyc.generators.size() == 1);

  Json bad;
  bad["preset"] = "nonsense";
  CHECK_THROWS_AS(group_from_json(bad), Error);

  Json bad_rel;
  bad_rel["generators"] = {{2.0, 0.0, 0.0, 0.5}};
  bad_rel["relations"] = {{0, 0}};
  CHECK_THROWS_AS(group_from_json(bad_rel), Error);
}
