#include "fuplab/json_io.hpp"

#include <cstdio>

#include "fuplab/common.hpp"

namespace fuplab {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json interval_set_to_json(const IntervalSet& set) {
  Json j;
  j["window"] = {set.window().lo, set.window().hi};
  Json parts = Json::array();
  for (const Interval& p : set.parts()) parts.push_back({p.lo, p.hi});
  j["parts"] = std::move(parts);
  return j;
}

IntervalSet interval_set_from_json(const Json& j) {
  try {
    Interval window{0.0, 1.0};
    if (j.contains("window")) {
      window = {j.at("window").at(0).get<double>(),
                j.at("window").at(1).get<double>()};
    }
    std::vector<Interval> parts;
    for (const auto& p : j.at("parts")) {
      parts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return IntervalSet::normalize(parts, window);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, "interval_set_from_json", e.what());
  }
}

Json tree_to_json(const CantorTree& tree) {
  Json j;
  j["L"] = tree.base_L();
  j["k0"] = tree.cutoff_k0();
  j["depth"] = tree.depth();
  Json kept = Json::array();
  for (int k = 0; k <= tree.depth(); k++) {
    kept.push_back(tree.kept_at_level(k));
  }
  j["kept"] = std::move(kept);
  return j;
}

void tree_write_json(std::ostream& os, const CantorTree& tree) {
  os << "{\"L\":" << tree.base_L() << ",\"k0\":" << tree.cutoff_k0()
     << ",\"depth\":" << tree.depth() << ",\"kept\":[";
  for (int k = 0; k <= tree.depth(); k++) {
    if (k) os << ',';
    os << '[';
    auto ms = tree.kept_at_level(k);
    for (std::size_t i = 0; i < ms.size(); i++) {
      if (i) os << ',';
      os << ms[i];
    }
    os << ']';
  }
  os << "]}";
}

CantorTree tree_from_json(const Json& j) {
  try {
    int L = j.at("L").get<int>();
    int k0 = j.at("k0").get<int>();
    int depth = j.at("depth").get<int>();
    int explicit_top = std::min(k0 + 1, depth);
    const auto& kept_json = j.at("kept");
    if (static_cast<int>(kept_json.size()) < explicit_top + 1) {
      fail(ErrorKind::invalid_input, "tree_from_json",
           "kept lists missing levels");
    }
    std::vector<std::vector<std::uint64_t>> kept;
    for (int k = 0; k <= explicit_top; k++) {
      kept.push_back(kept_json.at(k).get<std::vector<std::uint64_t>>());
    }
    // recover removal choices from the kept index lists
    std::vector<std::vector<std::uint8_t>> removed(explicit_top);
    for (int k = 0; k < explicit_top; k++) {
      removed[k].reserve(kept[k].size());
      std::size_t pos = 0;
      const auto& next = kept[k + 1];
      for (std::uint64_t m : kept[k]) {
        int rm = -1;
        for (int c = 0; c < L; c++) {
          std::uint64_t child = m * static_cast<std::uint64_t>(L) + c;
          if (pos < next.size() && next[pos] == child) {
            pos++;
          } else if (rm < 0) {
            rm = c;
          } else {
            fail(ErrorKind::invalid_input, "tree_from_json",
                 "node missing more than one child");
          }
        }
        if (rm < 0) {
          fail(ErrorKind::invalid_input, "tree_from_json",
               "node keeps all children");
        }
        removed[k].push_back(static_cast<std::uint8_t>(rm));
      }
      if (pos != next.size()) {
        fail(ErrorKind::invalid_input, "tree_from_json",
             "orphan indices at level " + std::to_string(k + 1));
      }
    }
    return CantorTree::from_parts(L, k0, depth, std::move(kept),
                                  std::move(removed));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, "tree_from_json", e.what());
  }
}

Json kernel_spec_to_json(const KernelSpec& spec) {
  Json j;
  j["phase"] = spec.phase == PhaseKind::Fourier ? "fourier" : "hyperbolic";
  j["w"] = spec.w;
  j["d_min"] = spec.d_min;
  j["x_window"] = {spec.x_window.lo, spec.x_window.hi};
  j["y_window"] = {spec.y_window.lo, spec.y_window.hi};
  j["amp_scale"] = spec.amp_scale;
  return j;
}

KernelSpec kernel_spec_from_json(const Json& j) {
  try {
    KernelSpec spec;
    std::string phase = j.at("phase").get<std::string>();
    if (phase == "fourier") {
      spec.phase = PhaseKind::Fourier;
    } else if (phase == "hyperbolic") {
      spec.phase = PhaseKind::Hyperbolic;
    } else {
      fail(ErrorKind::invalid_input, "kernel_spec_from_json",
           "phase must be fourier or hyperbolic");
    }
    if (j.contains("w")) spec.w = j.at("w").get<double>();
    if (j.contains("d_min")) spec.d_min = j.at("d_min").get<double>();
    if (j.contains("x_window")) {
      spec.x_window = {j.at("x_window").at(0).get<double>(),
                       j.at("x_window").at(1).get<double>()};
    }
    if (j.contains("y_window")) {
      spec.y_window = {j.at("y_window").at(0).get<double>(),
                       j.at("y_window").at(1).get<double>()};
    }
    if (j.contains("amp_scale")) {
      spec.amp_scale = j.at("amp_scale").get<double>();
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, "kernel_spec_from_json", e.what());
  }
}

FuchsianGroup group_from_json(const Json& j) {
  try {
    if (j.contains("preset")) {
      std::string name = j.at("preset").get<std::string>();
      if (name == "bolza") return FuchsianGroup::bolza();
      fail(ErrorKind::invalid_input, "group_from_json",
           "unknown preset " + name);
    }
    std::vector<MoebiusElement> gens;
    for (const auto& g : j.at("generators")) {
      gens.push_back(MoebiusElement{g.at(0).get<double>(),
                                    g.at(1).get<double>(),
                                    g.at(2).get<double>(),
                                    g.at(3).get<double>()});
    }
    std::vector<std::vector<int>> relations;
    if (j.contains("relations")) {
      relations = j.at("relations").get<std::vector<std::vector<int>>>();
    }
    return FuchsianGroup::from_generators(std::move(gens),
                                          std::move(relations));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, "group_from_json", e.what());
  }
}

Json group_to_json(const FuchsianGroup& group) {
  Json j;
  if (!group.preset_name.empty()) {
    j["preset"] = group.preset_name;
    return j;
  }
  Json gens = Json::array();
  for (const auto& g : group.generators) {
    gens.push_back({g.a, g.b, g.c, g.d});
  }
  j["generators"] = std::move(gens);
  j["relations"] = group.relation_products;
  return j;
}

Json decay_fit_to_json(const DecayFit& fit) {
  Json j;
  j["beta"] = fit.beta;
  j["intercept"] = fit.intercept;
  j["beta_stderr"] = fit.beta_stderr;
  j["r_squared"] = fit.r_squared;
  j["n_excluded"] = fit.n_excluded;
  Json pts = Json::array();
  for (const auto& [h, n] : fit.points) pts.push_back({h, n});
  j["points"] = std::move(pts);
  return j;
}

}  // namespace fuplab
