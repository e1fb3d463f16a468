#pragma once

#include <string>
#include <vector>

#include "fuplab/moebius.hpp"

namespace fuplab {

// Cocompact Fuchsian group given by explicit generators. Relation
// products (index sequences into `generators`) must compose to plus or
// minus the identity; they are validated on construction.
struct FuchsianGroup {
  std::vector<MoebiusElement> generators;
  std::vector<std::vector<int>> relation_products;
  std::string preset_name;

  // generators together with their inverses, used by reduction
  std::vector<MoebiusElement> reduction_moves;

  static FuchsianGroup from_generators(
      std::vector<MoebiusElement> gens,
      std::vector<std::vector<int>> relations,
      std::string preset = "");

  // The Bolza (genus 2) surface group: the regular hyperbolic octagon
  // with opposite sides paired. Eight side-pairing elements g_k, g_k^-1
  // where g_k translates by twice the apothem (cosh = 1 + sqrt 2) in
  // direction k*pi/4; relation g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = id.
  static FuchsianGroup bolza();

  double relation_residual(const std::vector<int>& relation) const;
};

// Greedy fundamental-domain representative: left-multiplies by
// generators/inverses while the distance d(m.i, i) strictly decreases,
// then fixes the canonical sign. Idempotent; throws a construction error
// if 10^4 steps do not reach a local minimum.
MoebiusElement reduce(const MoebiusElement& m, const FuchsianGroup& group);

// Dirichlet-domain membership about i, tested against the generator
// orbit points. Exact for the Bolza octagon, approximate in general.
bool in_dirichlet_domain(std::complex<double> z, const FuchsianGroup& group,
                         double tol = 1e-12);

}  // namespace fuplab
