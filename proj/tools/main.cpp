// Command-line Monte Carlo driver for the secrecy-rate simulator.
//
//   xlris-sim converge   [--scenario f] [--seed s] [--trials n] [--mode m]
//                        [--out dir] [--full-scale]
//   xlris-sim dist-sweep [common flags] [--radii 5,7,...] [--eve-azimuth rad]
//   xlris-sim elem-sweep [common flags] [--panels 4x2,8x2,...]
//   xlris-sim baseline   [common flags]
//
// Exit codes: 0 success, 2 configuration error, 3 every trial infeasible.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "xlris/sweeps.hpp"

namespace {

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string mode_str;
  std::uint64_t seed = 0;
  int trials = -1;
  bool full_scale = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* mode_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--scenario", a.scenario_path,
                  "scenario file (TOML subset); empty runs the defaults");
  a.seed_opt = cmd->add_option("--seed", a.seed, "base seed (trial t uses seed+t)");
  a.trials_opt = cmd->add_option("--trials", a.trials, "Monte Carlo trials");
  a.mode_opt = cmd->add_option(
      "--mode", a.mode_str,
      "continuous | discrete:<b> | stochastic | ff | nojam");
  cmd->add_option("--out", a.out_dir, "output directory")
      ->default_str("out");
  cmd->add_flag("--full-scale", a.full_scale,
                "paper-scale geometry (8 antennas, 64x8 panel, 10 GHz)");
}

xlris::ScenarioConfig build_config(const CommonArgs& a) {
  xlris::ScenarioConfig cfg = xlris::load_scenario(a.scenario_path);
  if (a.full_scale) xlris::apply_full_scale(cfg);
  if (a.seed_opt && a.seed_opt->count()) cfg.base_seed = a.seed;
  if (a.trials_opt && a.trials_opt->count()) {
    if (a.trials < 1) throw xlris::ConfigError("--trials must be >= 1");
    cfg.trials = a.trials;
  }
  if (a.mode_opt && a.mode_opt->count())
    cfg.mode = xlris::ModeSpec::parse(a.mode_str);
  cfg.validate();
  return cfg;
}

std::pair<int, int> parse_panel(const std::string& s) {
  auto x = s.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= s.size())
    throw xlris::ConfigError("bad panel '" + s + "' (use <n1>x<n2>)");
  try {
    int n1 = std::stoi(s.substr(0, x));
    int n2 = std::stoi(s.substr(x + 1));
    if (n1 < 1 || n2 < 1) throw std::out_of_range("");
    return {n1, n2};
  } catch (const std::exception&) {
    throw xlris::ConfigError("bad panel '" + s + "' (use <n1>x<n2>)");
  }
}

int finish(const std::vector<xlris::SweepResult>& results,
           const std::string& out_dir) {
  xlris::emit_outputs(results, out_dir);
  std::size_t total = 0, infeasible = 0;
  for (const auto& r : results) {
    total += r.rows.size();
    for (const auto& row : r.rows)
      if (row.status == "infeasible") ++infeasible;
    std::cout << r.label << ": " << r.rows.size() << " rows -> " << out_dir
              << "/" << r.label << ".csv\n";
  }
  if (total > 0 && infeasible == total) {
    std::cerr << "every trial was infeasible\n";
    return 3;
  }
  return 0;
}

std::vector<xlris::ModeSpec> default_mode_list(bool include_channel_baselines) {
  using xlris::ModeSpec;
  using xlris::RunMode;
  std::vector<ModeSpec> modes = {{RunMode::continuous, 3},
                                 {RunMode::discrete, 1},
                                 {RunMode::discrete, 2},
                                 {RunMode::discrete, 3},
                                 {RunMode::stochastic, 3}};
  if (include_channel_baselines) {
    modes.push_back({RunMode::no_jamming, 3});
    modes.push_back({RunMode::far_field, 3});
  }
  return modes;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy-rate Monte Carlo simulator (XL reflecting surface)"};
  app.require_subcommand(1);

  CommonArgs conv_args, dist_args, elem_args, base_args;

  CLI::App* conv = app.add_subcommand(
      "converge", "per-sweep secrecy rate, with and without jamming");
  add_common(conv, conv_args);

  CLI::App* dist = app.add_subcommand(
      "dist-sweep", "secrecy rate vs eavesdropper distance (near/far field)");
  add_common(dist, dist_args);
  std::vector<double> radii = {5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25};
  double eve_azimuth = xlris::kPi / 4;
  dist->add_option("--radii", radii, "eavesdropper radii in meters")
      ->delimiter(',');
  dist->add_option("--eve-azimuth", eve_azimuth,
                   "eavesdropper azimuth in radians");

  CLI::App* elem = app.add_subcommand(
      "elem-sweep", "secrecy rate vs panel size across modes");
  add_common(elem, elem_args);
  std::vector<std::string> panel_strs = {"4x2", "8x2", "8x4", "16x4"};
  elem->add_option("--panels", panel_strs, "panel sizes as <n1>x<n2>")
      ->delimiter(',');

  CLI::App* base = app.add_subcommand(
      "baseline", "fixed-geometry comparison across all modes");
  add_common(base, base_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) {
      xlris::ScenarioConfig cfg = build_config(conv_args);
      int trials = xlris::default_trials(cfg, 10);
      return finish(xlris::run_convergence(cfg, trials), conv_args.out_dir);
    }
    if (dist->parsed()) {
      xlris::ScenarioConfig cfg = build_config(dist_args);
      int trials = xlris::default_trials(cfg, 50);
      double deg = eve_azimuth * 180.0 / xlris::kPi;
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_az%g", deg);
      return finish(xlris::run_distance_sweep(cfg, radii, eve_azimuth, trials,
                                              true, suffix),
                    dist_args.out_dir);
    }
    if (elem->parsed()) {
      xlris::ScenarioConfig cfg = build_config(elem_args);
      int trials = xlris::default_trials(cfg, 50);
      std::vector<std::pair<int, int>> panels;
      for (const auto& s : panel_strs) panels.push_back(parse_panel(s));
      std::vector<xlris::ModeSpec> modes =
          elem_args.mode_opt->count() ? std::vector<xlris::ModeSpec>{cfg.mode}
                                      : default_mode_list(false);
      return finish(xlris::run_element_sweep(cfg, panels, modes, trials),
                    elem_args.out_dir);
    }
    if (base->parsed()) {
      xlris::ScenarioConfig cfg = build_config(base_args);
      int trials = xlris::default_trials(cfg, 50);
      std::vector<xlris::ModeSpec> modes =
          base_args.mode_opt->count() ? std::vector<xlris::ModeSpec>{cfg.mode}
                                      : default_mode_list(true);
      return finish(xlris::run_baseline(cfg, modes, trials),
                    base_args.out_dir);
    }
  } catch (const xlris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
