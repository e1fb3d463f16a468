#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "fuplab/cantor_tree.hpp"
#include "fuplab/fuchsian.hpp"
#include "fuplab/interval_set.hpp"
#include "fuplab/oscillatory.hpp"

namespace fuplab {

using Json = nlohmann::ordered_json;

// {"window":[0,1],"parts":[[lo,hi],...]}
Json interval_set_to_json(const IntervalSet& set);
IntervalSet interval_set_from_json(const Json& j);

// {"L":..,"k0":..,"depth":..,"kept":[[...],...]}; the kept lists cover
// every level 0..depth, so this can get large for deep wide trees (the
// streaming writer below avoids building the document in memory).
Json tree_to_json(const CantorTree& tree);
void tree_write_json(std::ostream& os, const CantorTree& tree);
CantorTree tree_from_json(const Json& j);

Json kernel_spec_to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const Json& j);

// {"preset":"bolza"} or {"generators":[[a,b,c,d],...],"relations":[[...]]}
FuchsianGroup group_from_json(const Json& j);
Json group_to_json(const FuchsianGroup& group);

Json decay_fit_to_json(const DecayFit& fit);

// fixed-format floating point for CSV payloads (17 significant digits,
// '.' decimal separator, byte-stable across runs)
std::string format_real(double v);

}  // namespace fuplab
