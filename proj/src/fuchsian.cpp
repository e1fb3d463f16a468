#include "fuplab/fuchsian.hpp"

#include <cmath>

#include "fuplab/common.hpp"

namespace fuplab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

MoebiusElement rotation(double theta) {
  double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {c, s, -s, c};
}

}  // namespace

FuchsianGroup FuchsianGroup::from_generators(
    std::vector<MoebiusElement> gens, std::vector<std::vector<int>> relations,
    std::string preset) {
  if (gens.empty()) {
    fail(ErrorKind::invalid_input, "fuchsian_group",
         "need at least one generator");
  }
  FuchsianGroup g;
  g.preset_name = std::move(preset);
  g.generators.reserve(gens.size());
  for (auto& m : gens) {
    MoebiusElement n = m.normalized();
    if (std::fabs(n.det() - 1.0) > 1e-12) {
      fail(ErrorKind::invalid_input, "fuchsian_group",
           "generator determinant off unity");
    }
    g.generators.push_back(n);
  }
  g.relation_products = std::move(relations);
  for (const auto& rel : g.relation_products) {
    for (int idx : rel) {
      if (idx < 0 || idx >= static_cast<int>(g.generators.size())) {
        fail(ErrorKind::invalid_input, "fuchsian_group",
             "relation index out of range");
      }
    }
    double res = g.relation_residual(rel);
    if (res > 1e-9) {
      fail(ErrorKind::invalid_input, "fuchsian_group",
           "relation product is not +-identity (residual " +
               std::to_string(res) + ")");
    }
  }
  g.reduction_moves = g.generators;
  for (const auto& m : g.generators) {
    g.reduction_moves.push_back(m.inverse().canonical_sign());
  }
  return g;
}

double FuchsianGroup::relation_residual(const std::vector<int>& rel) const {
  MoebiusElement p = MoebiusElement::identity();
  for (int idx : rel) p = p * generators[idx];
  return frobenius_distance(p, MoebiusElement::identity());
}

FuchsianGroup FuchsianGroup::bolza() {
  // apothem d of the regular octagon with vertex angle pi/4
  const double coshd = 1.0 + std::sqrt(2.0);
  const double dist = std::acosh(coshd);
  const MoebiusElement boost = geodesic_element(2.0 * dist);
  std::vector<MoebiusElement> gens;
  for (int k = 0; k < 4; k++) {
    MoebiusElement r = rotation(k * kPi / 4.0);
    gens.push_back((r * boost * r.inverse()).normalized());
  }
  for (int k = 0; k < 4; k++) {
    gens.push_back(gens[k].inverse().canonical_sign());
  }
  // g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3
  std::vector<int> relation = {0, 5, 2, 7, 4, 1, 6, 3};
  return from_generators(std::move(gens), {relation}, "bolza");
}

MoebiusElement reduce(const MoebiusElement& m, const FuchsianGroup& group) {
  if (group.reduction_moves.empty()) {
    fail(ErrorKind::invalid_input, "reduce", "group has no generators");
  }
  const std::complex<double> i(0.0, 1.0);
  MoebiusElement cur = m.normalized();
  double cur_d = hyperbolic_distance(cur.apply(i), i);
  for (int step = 0; step < 10000; step++) {
    MoebiusElement best = cur;
    double best_d = cur_d;
    for (const MoebiusElement& mv : group.reduction_moves) {
      MoebiusElement cand = mv * cur;
      double d = hyperbolic_distance(cand.apply(i), i);
      if (d < best_d - 1e-12) {
        best = cand;
        best_d = d;
      }
    }
    if (best_d >= cur_d - 1e-12) return cur.canonical_sign();
    cur = best;
    cur_d = best_d;
  }
  fail(ErrorKind::construction, "reduce",
       "no local minimum after 10000 steps; generator set looks bad");
}

bool in_dirichlet_domain(std::complex<double> z, const FuchsianGroup& group,
                         double tol) {
  const std::complex<double> i(0.0, 1.0);
  double d0 = hyperbolic_distance(z, i);
  for (const MoebiusElement& mv : group.reduction_moves) {
    if (hyperbolic_distance(z, mv.apply(i)) < d0 - tol) return false;
  }
  return true;
}

}  // namespace fuplab
