// fuplab: experiment runner for the porous-set uncertainty laboratory.
// One subcommand per module; deterministic in --seed; every file output
// is paired with a .manifest.json carrying the echoed config, version,
// wall time and warnings. Exit codes: 0 ok, 2 validation, 3 numeric or
// construction failure.
#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <functional>
#include <sstream>

#include "fuplab/cantor_tree.hpp"
#include "fuplab/common.hpp"
#include "fuplab/flows.hpp"
#include "fuplab/json_io.hpp"
#include "fuplab/oscillatory.hpp"
#include "fuplab/witness.hpp"
#include "fuplab/words.hpp"

namespace {

constexpr const char* kVersion = "fuplab 0.1.0";

using fuplab::Json;

struct Emitter {
  std::string out_path;
  Json config_echo;
  std::vector<std::string> warnings;
  std::chrono::steady_clock::time_point t0 =
      std::chrono::steady_clock::now();

  void emit(const std::string& payload) const {
    if (out_path.empty()) {
      std::cout << payload;
      if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
      return;
    }
    {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) {
        fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                     "cannot open output file " + out_path);
      }
      f << payload;
    }
    Json manifest;
    manifest["config_echo"] = config_echo;
    manifest["tool_version"] = kVersion;
    manifest["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0)
            .count();
    manifest["warnings"] = warnings;
    std::ofstream mf(out_path + ".manifest.json", std::ios::binary);
    mf << manifest.dump(2) << '\n';
  }
};

Json load_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                 "cannot read " + path);
  }
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                 std::string("config/json parse error: ") + e.what());
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); i++) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

fuplab::IntervalSet load_or_generate_set(const std::string& file, bool gen,
                                         double nu, double alpha0,
                                         std::uint64_t seed, bool has_seed) {
  if (!file.empty()) return fuplab::interval_set_from_json(load_json_file(file));
  if (gen) {
    if (!has_seed) {
      fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                   "--seed is required for randomized commands");
    }
    return fuplab::random_porous(nu, alpha0, seed);
  }
  fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
               "need --set FILE or --generate");
}

fuplab::FuchsianGroup load_group(const std::string& preset,
                                 const std::string& file) {
  if (!file.empty()) return fuplab::group_from_json(load_json_file(file));
  if (preset == "bolza") return fuplab::FuchsianGroup::bolza();
  fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
               "unknown group preset " + preset);
}

fuplab::UnitTangentPoint seeded_start(const fuplab::FuchsianGroup& g,
                                      fuplab::Rng rng) {
  fuplab::MoebiusElement m =
      fuplab::geodesic_element(rng.uniform(-1.5, 1.5)) *
      fuplab::stable_element(rng.uniform(-1.0, 1.0)) *
      fuplab::unstable_element(rng.uniform(-1.0, 1.0));
  return {fuplab::reduce(m, g), 1.0};
}

// The ExperimentConfig file mirrors {command, params, seed, output_path,
// format}; params are injected as long flags ahead of the explicit
// command line so that explicit flags win.
std::vector<std::string> merge_config(int argc, char** argv,
                                      Json* echo_out) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); i++) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                     "--config needs a file argument");
      }
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
  }
  if (config_path.empty()) return args;

  Json cfg = load_json_file(config_path);
  *echo_out = cfg;
  std::vector<std::string> merged;
  std::string command;
  for (auto& [key, value] : cfg.items()) {
    if (key == "command") {
      command = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) {
        fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                     "config params must be an object");
      }
    } else if (key != "seed" && key != "output_path" && key != "format") {
      fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                   "unknown config key '" + key + "'");
    }
  }
  if (!command.empty()) {
    std::istringstream ss(command);
    std::string tok;
    while (ss >> tok) merged.push_back(tok);
  }
  auto push_kv = [&merged](const std::string& key, const Json& v) {
    merged.push_back("--" + key);
    if (v.is_string()) {
      merged.push_back(v.get<std::string>());
    } else if (v.is_boolean()) {
      if (!v.get<bool>()) merged.pop_back();
    } else {
      merged.push_back(v.dump());
    }
  };
  if (cfg.contains("params")) {
    for (auto& [key, v] : cfg.at("params").items()) push_kv(key, v);
  }
  if (cfg.contains("seed")) push_kv("seed", cfg.at("seed"));
  if (cfg.contains("output_path")) push_kv("out", cfg.at("output_path"));
  if (cfg.contains("format")) {
    std::string f = cfg.at("format").get<std::string>();
    if (f == "JSON" || f == "json") merged.push_back("--json");
  }
  merged.insert(merged.end(), args.begin(), args.end());
  return merged;
}

int run(std::vector<std::string> args, const Json& config_echo) {
  CLI::App app{"porous-set uncertainty laboratory"};
  app.set_help_flag("--help", "print help");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker cap (0 = hardware)");

  // ---- porosity ----------------------------------------------------
  auto* porosity = app.add_subcommand("porosity", "porosity certification");
  struct {
    double nu = 0.2, alpha0 = 1.0 / 1024.0, alpha1 = 1.0;
    std::string set_file, out;
    bool generate = false;
    std::uint64_t seed = 0;
    bool json = true;
  } por;
  porosity->add_option("--nu", por.nu)->required();
  porosity->add_option("--alpha0", por.alpha0)->required();
  porosity->add_option("--alpha1", por.alpha1);
  porosity->add_option("--set", por.set_file);
  porosity->add_flag("--generate", por.generate);
  auto* por_seed = porosity->add_option("--seed", por.seed);
  porosity->add_option("--out", por.out);
  porosity->add_flag("--json", por.json);

  // ---- embed -------------------------------------------------------
  auto* embed = app.add_subcommand("embed", "Cantor-tree embedding");
  struct {
    double nu = 0.25, alpha0 = 1.0 / 4096.0;
    int extra_levels = 4;
    int regularity_samples = 0;
    std::string set_file, out;
    bool generate = false;
    std::uint64_t seed = 0;
  } emb;
  embed->add_option("--nu", emb.nu)->required();
  embed->add_option("--alpha0", emb.alpha0)->required();
  embed->add_option("--extra-levels", emb.extra_levels);
  embed->add_option("--check-regularity", emb.regularity_samples);
  std::string reg_csv;
  embed->add_option("--regularity-csv", reg_csv,
                    "write per-sample ratios as CSV");
  embed->add_option("--set", emb.set_file);
  embed->add_flag("--generate", emb.generate);
  auto* emb_seed = embed->add_option("--seed", emb.seed);
  embed->add_option("--out", emb.out);

  // ---- words -------------------------------------------------------
  auto* words = app.add_subcommand("words", "word combinatorics");
  words->require_subcommand(1);
  auto* wcount = words->add_subcommand("count", "controlled-set counting");
  struct {
    int n0 = 12;
    double alpha = 0.25;
    bool verify = false;
    std::string out;
    double h = 0.0;
  } wc;
  wcount->add_option("--n0", wc.n0)->required();
  wcount->add_option("--alpha", wc.alpha)->required();
  wcount->add_option("--h", wc.h, "for the h^(-4 sqrt(alpha)) comparison");
  wcount->add_flag("--verify-exhaustive", wc.verify);
  wcount->add_flag("--json", [](std::int64_t) {});
  wcount->add_option("--out", wc.out);
  auto* wparams = words->add_subcommand("params", "Ehrenfest-time parameters");
  struct {
    double h = 0.01, rho = 0.9, beta = 0.1;
    std::string out;
  } wp;
  wparams->add_option("--h", wp.h)->required();
  wparams->add_option("--rho", wp.rho)->required();
  wparams->add_option("--beta", wp.beta)->required();
  wparams->add_option("--out", wp.out);

  // ---- fup ---------------------------------------------------------
  auto* fup = app.add_subcommand("fup", "masked oscillatory norm sweep");
  struct {
    std::string kernel = "fourier";
    double w = 1.0, dmin = 0.0, rho = 0.9, nu = 0.2;
    int h_min_exp = 6, h_max_exp = 10, oversample = 8;
    std::string mode = "raw";
    std::string set_plus, set_minus, out;
    int cantor_level = 0, cantor_base = 3;
    bool generate = false;
    std::uint64_t seed = 0;
  } fp;
  fup->add_option("--kernel", fp.kernel)
      ->check(CLI::IsMember({"fourier", "hyperbolic"}));
  fup->add_option("--w", fp.w);
  fup->add_option("--dmin", fp.dmin);
  fup->add_option("--rho", fp.rho)->required();
  fup->add_option("--nu", fp.nu);
  fup->add_option("--h-min-exp", fp.h_min_exp);
  fup->add_option("--h-max-exp", fp.h_max_exp);
  fup->add_option("--oversample", fp.oversample);
  fup->add_option("--mode", fp.mode)->check(CLI::IsMember({"raw", "embedded"}));
  fup->add_option("--set-plus", fp.set_plus);
  fup->add_option("--set-minus", fp.set_minus);
  fup->add_option("--cantor-level", fp.cantor_level);
  fup->add_option("--cantor-base", fp.cantor_base);
  fup->add_flag("--generate", fp.generate);
  auto* fup_seed = fup->add_option("--seed", fp.seed);
  fup->add_option("--out", fp.out);

  // ---- flow --------------------------------------------------------
  auto* flow = app.add_subcommand("flow", "hyperbolic dynamics");
  flow->require_subcommand(1);
  struct {
    std::string preset = "bolza", group_file;
  } grp;
  flow->add_option("--group", grp.preset);
  flow->add_option("--group-file", grp.group_file);

  auto* favg = flow->add_subcommand("avg", "horocycle vs Liouville averages");
  struct {
    double T = 80.0, bump_radius = 2.8;
    int n_points = 20, steps_per_unit = 120, mc_samples = 200000;
    std::uint64_t seed = 0;
    std::string out, t_grid = "";
  } fa;
  favg->add_option("--T", fa.T);
  favg->add_option("--t-grid", fa.t_grid, "comma list of T values");
  favg->add_option("--bump-radius", fa.bump_radius);
  favg->add_option("--n-points", fa.n_points);
  favg->add_option("--steps-per-unit", fa.steps_per_unit);
  favg->add_option("--mc-samples", fa.mc_samples);
  auto* fa_seed = favg->add_option("--seed", fa.seed);
  favg->add_option("--out", fa.out);

  auto* fhit = flow->add_subcommand("hit", "horocycle hitting times");
  struct {
    double radius = 0.5, s_max = 400.0;
    int n = 100;
    std::string direction = "unstable";
    std::uint64_t seed = 0;
    std::string out;
  } fh;
  fhit->add_option("--radius", fh.radius);
  fhit->add_option("--s-max", fh.s_max);
  fhit->add_option("--n", fh.n);
  fhit->add_option("--direction", fh.direction)
      ->check(CLI::IsMember({"stable", "unstable"}));
  auto* fh_seed = fhit->add_option("--seed", fh.seed);
  fhit->add_option("--out", fh.out);

  auto* fwit = flow->add_subcommand("witness", "porosity witness search");
  struct {
    std::string tau_grid = "1,0.5,0.25";
    int n_points = 50, n_samples = 3;
    double inner = 0.2, outer = 0.3, nu1 = 0.0075, T = 0.0;
    std::uint64_t seed = 0;
    std::string out;
  } fw;
  fwit->add_option("--tau-grid", fw.tau_grid);
  fwit->add_option("--n-points", fw.n_points);
  fwit->add_option("--n-samples", fw.n_samples);
  fwit->add_option("--inner", fw.inner);
  fwit->add_option("--outer", fw.outer);
  fwit->add_option("--nu1", fw.nu1);
  fwit->add_option("--T", fw.T, "0 = calibrate by hitting sweeps");
  auto* fw_seed = fwit->add_option("--seed", fw.seed);
  fwit->add_option("--out", fw.out);

  // let unmatched options inside subcommands (e.g. --threads) reach the
  // root parser
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    for (auto* sub : cmd->get_subcommands({})) {
      sub->fallthrough(true);
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  std::vector<const char*> argv_vec;
  argv_vec.push_back("fuplab");
  for (auto& a : args) argv_vec.push_back(a.c_str());
  app.parse(int(argv_vec.size()), argv_vec.data());

  auto parse_grid = [](const std::string& text) {
    std::vector<double> vals;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) vals.push_back(std::stod(tok));
    }
    return vals;
  };

  if (porosity->parsed()) {
    Emitter em;
    em.out_path = por.out;
    em.config_echo = config_echo;
    auto omega = load_or_generate_set(por.set_file, por.generate, por.nu,
                                      por.alpha0, por.seed, !por_seed->empty());
    auto rep = fuplab::porosity_check(omega, por.nu, por.alpha0, por.alpha1);
    Json j;
    j["certified"] = rep.certified;
    j["nu_nominal"] = rep.nu_nominal;
    j["nu_certified"] = rep.nu_certified;
    j["alpha0"] = rep.alpha0;
    j["alpha1"] = rep.alpha1;
    j["windows_scanned"] = rep.windows_scanned;
    if (rep.witness) j["witness"] = {rep.witness->lo, rep.witness->hi};
    j["set"] = fuplab::interval_set_to_json(omega);
    em.emit(j.dump(2));
    return 0;
  }

  if (embed->parsed()) {
    Emitter em;
    em.out_path = emb.out;
    em.config_echo = config_echo;
    auto omega = load_or_generate_set(emb.set_file, emb.generate, emb.nu,
                                      emb.alpha0, emb.seed, !emb_seed->empty());
    auto pre = fuplab::porosity_check(omega, emb.nu, emb.alpha0, 1.0);
    if (!pre.certified) {
      fuplab::fail(fuplab::ErrorKind::construction, "embed_porous",
                   "input set failed porosity_check precondition");
    }
    auto tree = fuplab::CantorTree::embed_porous(omega, emb.nu, emb.alpha0,
                                                 emb.extra_levels);
    std::ostringstream payload;
    fuplab::tree_write_json(payload, tree);
    if (emb.regularity_samples > 0) {
      if (emb_seed->empty()) {
        fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                     "--seed is required for randomized commands");
      }
      auto mu = fuplab::RegularMeasure::from_tree(tree);
      auto rep = fuplab::regularity_check(mu, emb.regularity_samples,
                                          emb.seed + 1);
      Json rj;
      rj["upper_ok"] = rep.upper_ok;
      rj["lower_ok"] = rep.lower_ok;
      rj["worst_upper_ratio"] = rep.worst_upper_ratio;
      rj["worst_lower_ratio"] = rep.worst_lower_ratio;
      rj["samples"] = rep.samples;
      rj["C_R"] = mu.C_R;
      rj["delta"] = mu.delta;
      payload << '\n' << rj.dump(2);
      if (!reg_csv.empty()) {
        auto samples = fuplab::regularity_sweep(mu, emb.regularity_samples,
                                                emb.seed + 1);
        std::string csv = csv_line({"scale", "ratio_upper", "ratio_lower"});
        for (const auto& smp : samples) {
          csv += csv_line({fuplab::format_real(smp.scale),
                           fuplab::format_real(smp.ratio_upper),
                           fuplab::format_real(smp.ratio_lower)});
        }
        std::ofstream cf(reg_csv, std::ios::binary);
        cf << csv;
      }
    }
    em.emit(payload.str());
    return 0;
  }

  if (wcount->parsed()) {
    Emitter em;
    em.out_path = wc.out;
    em.config_echo = config_echo;
    fuplab::PartitionParams params;
    params.n0 = wc.n0;
    params.alpha = wc.alpha;
    params.h = wc.h;
    auto rep = fuplab::count_x(params, wc.verify);
    Json j;
    j["n_uncontrolled"] = rep.n_uncontrolled.str();
    j["n_x"] = rep.n_x.str();
    j["stirling_bound"] = rep.stirling_bound.str();
    j["stirling_bound_pow8"] = rep.stirling_bound_pow8.str();
    j["within_stirling"] = rep.within_stirling;
    j["verified_exhaustively"] = rep.verified_exhaustively;
    if (wc.h > 0.0) {
      j["asymptotic_bound"] = rep.asymptotic_bound;
      j["ratio_vs_asymptotic"] = rep.ratio_vs_asymptotic;
    }
    em.emit(j.dump(2));
    if (!rep.verify_refused.empty()) {
      std::cerr << rep.verify_refused << "\n";
      return 2;  // resource refusal; the closed form was still emitted
    }
    return 0;
  }

  if (wparams->parsed()) {
    Emitter em;
    em.out_path = wp.out;
    em.config_echo = config_echo;
    auto p = fuplab::derive_params(wp.h, wp.rho, wp.beta);
    Json j;
    j["h"] = p.h;
    j["rho"] = p.rho;
    j["beta"] = p.beta;
    j["alpha"] = p.alpha;
    j["N0"] = p.n0;
    j["N1"] = p.n1;
    em.emit(j.dump(2));
    return 0;
  }

  if (fup->parsed()) {
    Emitter em;
    em.out_path = fp.out;
    em.config_echo = config_echo;
    fuplab::KernelSpec spec;
    spec.phase = fp.kernel == "fourier" ? fuplab::PhaseKind::Fourier
                                        : fuplab::PhaseKind::Hyperbolic;
    spec.w = fp.w;
    spec.d_min = fp.dmin;
    fuplab::IntervalSet plus, minus;
    if (!fp.set_plus.empty() || !fp.set_minus.empty()) {
      if (fp.set_plus.empty() || fp.set_minus.empty()) {
        fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                     "need both --set-plus and --set-minus");
      }
      plus = fuplab::interval_set_from_json(load_json_file(fp.set_plus));
      minus = fuplab::interval_set_from_json(load_json_file(fp.set_minus));
    } else if (fp.cantor_level > 0) {
      std::vector<fuplab::Interval> cur = {{0.0, 1.0}};
      for (int k = 0; k < fp.cantor_level; k++) {
        std::vector<fuplab::Interval> next;
        for (auto& iv : cur) {
          double u = iv.length() / fp.cantor_base;
          next.push_back({iv.lo, iv.lo + u});
          next.push_back({iv.hi - u, iv.hi});
        }
        cur = std::move(next);
      }
      plus = fuplab::IntervalSet::normalize(cur);
      minus = plus;
    } else {
      plus = load_or_generate_set("", fp.generate, fp.nu,
                                  std::pow(2.0, -fp.h_max_exp), fp.seed,
                                  !fup_seed->empty());
      minus = load_or_generate_set("", fp.generate, fp.nu,
                                   std::pow(2.0, -fp.h_max_exp), fp.seed + 1,
                                   !fup_seed->empty());
    }
    std::vector<double> hs;
    for (int e = fp.h_min_exp; e <= fp.h_max_exp; e++) {
      hs.push_back(std::pow(2.0, -e));
    }
    fuplab::FupOptions opt;
    opt.oversample = fp.oversample;
    opt.threads = threads;
    opt.seed = fup_seed->empty() ? 1 : fp.seed;
    auto res = fuplab::fup_experiment(
        plus, minus, fp.nu, spec, fp.rho, hs,
        fp.mode == "raw" ? fuplab::FupMode::Raw : fuplab::FupMode::Embedded,
        opt);
    std::string csv = csv_line(
        {"h", "rho", "dim", "norm_masked", "norm_unmasked", "oversample"});
    for (const auto& r : res.rows) {
      csv += csv_line({fuplab::format_real(r.h), fuplab::format_real(r.rho),
                       std::to_string(r.dim),
                       fuplab::format_real(r.norm_masked),
                       std::isnan(r.norm_unmasked)
                           ? ""
                           : fuplab::format_real(r.norm_unmasked),
                       std::to_string(r.oversample)});
    }
    csv += "# fit " + fuplab::decay_fit_to_json(res.fit).dump() + "\n";
    em.warnings = res.warnings;
    em.emit(csv);
    return 0;
  }

  auto group = load_group(grp.preset, grp.group_file);

  if (favg->parsed()) {
    if (fa_seed->empty()) {
      fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                   "--seed is required for randomized commands");
    }
    Emitter em;
    em.out_path = fa.out;
    em.config_echo = config_echo;
    auto f = fuplab::bump_observable(group, {0.0, 1.0}, fa.bump_radius);
    auto mc = fuplab::liouville_average(group, f, fa.mc_samples, fa.seed);
    std::vector<double> t_vals =
        fa.t_grid.empty() ? std::vector<double>{fa.T} : parse_grid(fa.t_grid);
    std::string csv =
        csv_line({"point", "T", "average", "liouville", "liouville_se"});
    fuplab::Rng rng(fa.seed);
    for (int i = 0; i < fa.n_points; i++) {
      auto g0 = seeded_start(group, rng.split(i));
      for (double t : t_vals) {
        double avg = fuplab::horocycle_average(
            group, f, g0, t, int(t * fa.steps_per_unit));
        csv += csv_line({std::to_string(i), fuplab::format_real(t),
                         fuplab::format_real(avg),
                         fuplab::format_real(mc.value),
                         fuplab::format_real(mc.std_error)});
      }
    }
    em.emit(csv);
    return 0;
  }

  if (fhit->parsed()) {
    if (fh_seed->empty()) {
      fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                   "--seed is required for randomized commands");
    }
    Emitter em;
    em.out_path = fh.out;
    em.config_echo = config_echo;
    fuplab::MetricBall ball{fuplab::UnitTangentPoint::base(), fh.radius};
    auto dir = fh.direction == "stable" ? fuplab::Direction::Stable
                                        : fuplab::Direction::Unstable;
    std::string csv = csv_line({"point", "hit_s"});
    fuplab::Rng rng(fh.seed);
    double worst = 0.0;
    int misses = 0;
    for (int i = 0; i < fh.n; i++) {
      auto g0 = seeded_start(group, rng.split(i));
      auto s = fuplab::hitting_time(group, ball, g0, fh.s_max, dir);
      if (s) {
        worst = std::max(worst, *s);
      } else {
        misses++;
      }
      csv += csv_line({std::to_string(i),
                       s ? fuplab::format_real(*s) : std::string()});
    }
    csv += "# T_emp " + fuplab::format_real(worst) + " misses " +
           std::to_string(misses) + "\n";
    em.emit(csv);
    return 0;
  }

  if (fwit->parsed()) {
    if (fw_seed->empty()) {
      fuplab::fail(fuplab::ErrorKind::invalid_input, "cli",
                   "--seed is required for randomized commands");
    }
    Emitter em;
    em.out_path = fw.out;
    em.config_echo = config_echo;
    std::vector<fuplab::WitnessTarget> targets = {
        {fuplab::UnitTangentPoint::base(), fw.inner, fw.outer},
        {fuplab::geodesic_flow(group, fuplab::UnitTangentPoint::base(), 1.2),
         fw.inner, fw.outer}};
    fuplab::Rng rng(fw.seed);
    double T = fw.T;
    if (T <= 0.0) {
      for (int i = 0; i < 24; i++) {
        auto g0 = seeded_start(group, rng.split(5000 + i));
        for (const auto& target : targets) {
          auto s = fuplab::hitting_time(group, {target.center, fw.inner}, g0,
                                        8000.0, fuplab::Direction::Unstable);
          if (s) T = std::max(T, *s);
        }
      }
      T = T * 1.5 + 1.0;
      em.warnings.push_back("T calibrated to " + fuplab::format_real(T));
    }
    fuplab::SliceSpec slice;
    slice.nu1 = fw.nu1;
    slice.n_samples = fw.n_samples;
    std::string csv = csv_line({"point", "tau", "letter", "j", "s0", "s_w",
                                "verified", "hit_found", "max_push_distance"});
    int verified = 0, total = 0;
    for (int i = 0; i < fw.n_points; i++) {
      auto g0 = seeded_start(group, rng.split(i));
      for (double tau : parse_grid(fw.tau_grid)) {
        for (int letter = 1; letter <= 2; letter++) {
          auto rec = fuplab::porosity_witness(group, targets, letter, g0,
                                              tau, T, slice);
          total++;
          if (rec.verified) verified++;
          csv += csv_line({std::to_string(i), fuplab::format_real(tau),
                           std::to_string(letter), std::to_string(rec.j),
                           fuplab::format_real(rec.s0),
                           fuplab::format_real(rec.s_w),
                           rec.verified ? "1" : "0",
                           rec.hit_found ? "1" : "0",
                           fuplab::format_real(rec.max_push_distance)});
        }
      }
    }
    csv += "# verified " + std::to_string(verified) + "/" +
           std::to_string(total) + " T " + fuplab::format_real(T) + "\n";
    em.emit(csv);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Json echo;
    auto args = merge_config(argc, argv, &echo);
    if (echo.is_null()) {
      echo = Json::object();
      std::string cmdline;
      for (auto& a : args) {
        cmdline += a;
        cmdline += ' ';
      }
      echo["command_line"] = cmdline;
    }
    return run(std::move(args), echo);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help / --version
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const fuplab::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.kind()) {
      case fuplab::ErrorKind::invalid_input:
      case fuplab::ErrorKind::resource:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
