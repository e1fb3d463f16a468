#pragma once

#include <string>
#include <vector>

#include "fuplab/flows.hpp"

namespace fuplab {

struct SliceSpec {
  double nu0 = 0.0;  // horocycle half-width of the slice
  double nu1 = 0.0;  // half-width in the complementary frame directions
  Direction direction = Direction::Unstable;
  int n_samples = 3;  // grid points per axis
};

// Target pair for the witness search: the orbit must enter `inner`;
// slice pushforwards must land inside `outer` around the same center.
struct WitnessTarget {
  UnitTangentPoint center;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
};

struct WitnessRecord {
  bool verified = false;
  bool hit_found = false;
  int letter = 0;     // which target ball (1 or 2)
  int j = 0;          // unique integer with e^{j-1} tau < T <= e^j tau
  double s0 = 0.0;    // e^{-j} s_w, in [0, tau]
  double s_w = 0.0;   // hitting time at phi_j(g)
  double tau = 0.0;
  double epsilon0 = 0.0;  // nu1 / (3T)
  int samples_checked = 0;
  double max_push_distance = 0.0;  // worst distance of a pushed sample
  std::string note;
};

// Constructive porosity witness along the unstable horocycle: computes
// j from e^{j-1} tau < T <= e^j tau, finds the hitting time s_w of the
// inner target ball at phi_j(g), sets s0 = e^{-j} s_w, then samples the
// unstable slice of half-widths (eps0 tau, nu1) around e^{s0 U_-}(g),
// pushes every sample forward by phi_j and checks it lands inside the
// outer ball. Requires 3T * 2^-20 <= tau <= 1.
WitnessRecord porosity_witness(const FuchsianGroup& group,
                               const std::vector<WitnessTarget>& targets,
                               int letter, const UnitTangentPoint& g,
                               double tau, double T, const SliceSpec& slice);

}  // namespace fuplab
