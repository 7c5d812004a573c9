#include "xlris/sweeps.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace xlris {

namespace {

constexpr std::uint64_t kPhaseSalt = 0x5052495341u;  // stochastic-phase stream

const char* status_label(const TrialResult& t) {
  return t.feasible ? to_string(t.status) : "infeasible";
}

TrialRow make_row(double sweep_value, int trial, std::uint64_t seed,
                  const TrialResult& t) {
  TrialRow row;
  row.sweep_value = sweep_value;
  row.trial = trial;
  row.seed = seed;
  if (t.feasible) {
    row.rate_bits = t.rates.secrecy_bits;
    row.rate_user = t.rates.user_bits;
    row.rate_eve = t.rates.eve_bits;
  }
  row.iters = t.iterations;
  row.status = status_label(t);
  return row;
}

} // namespace

void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("XLRIS_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) workers = v;
  }
  workers = std::max(1, std::min(workers, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

int default_trials(const ScenarioConfig& cfg, int command_default) {
  return cfg.trials >= 1 ? cfg.trials : command_default;
}

TrialResult run_stochastic_phase_trial(const ScenarioConfig& cfg,
                                       std::uint64_t seed) {
  return run_trial(cfg, seed, ModeSpec{RunMode::stochastic, 3});
}

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed,
                      const ModeSpec& mode,
                      std::optional<ReceiverModel> model_override,
                      std::optional<bool> jamming_override) {
  Rng rng(seed);
  ReceiverModel model = model_override.value_or(mode.receiver_model());
  ChannelSet ch =
      draw_channel_set(cfg.array, cfg.scene, cfg.fading, model, rng);
  bool jamming = jamming_override.value_or(mode.with_jamming());

  TrialResult out;
  if (mode.mode == RunMode::stochastic) {
    // Fixed random phases; only the transmit side is optimized.
    Rng phase_rng = Rng::substream(seed, kPhaseSalt);
    CVec v(cfg.array.ris_elements());
    for (int i = 0; i < v.size(); ++i) v(i) = phase_rng.unit_phase();
    RisVector ris{v};

    CascadedChannels cc = cascade(ch, ris);
    auto init = default_precoder_init(cc, cfg.limits, jamming);
    if (!init) {
      out.feasible = false;
      out.status = AoStatus::infeasible;
      return out;
    }
    RisMode rm{};
    PrecoderSettings ps = cfg.ao_settings(jamming, rm).p2;
    P2Result p2 = solve_p2(ch, ris, cfg.limits, *init, ps);
    if (!p2.diagnostics.feasible) {
      out.feasible = false;
      out.status = AoStatus::infeasible;
      return out;
    }
    out.rates = rates_and_secrecy(cc, p2.precoders, cfg.limits);
    out.iterations = p2.diagnostics.outer_iterations;
    out.status = AoStatus::converged;
    return out;
  }

  RisMode rm{mode.mode == RunMode::discrete, mode.bits};
  AoResult ao = solve_p1(ch, cfg.limits, cfg.ao_settings(jamming, rm));
  out.feasible = ao.feasible;
  out.status = ao.trace.status;
  out.iterations = static_cast<int>(ao.trace.sweeps.size());
  if (ao.feasible) out.rates = ao.rates;
  return out;
}

std::vector<SweepResult> run_convergence(const ScenarioConfig& cfg,
                                         int trials) {
  RisMode rm{cfg.mode.mode == RunMode::discrete, cfg.mode.bits};
  std::vector<SweepResult> out(2);
  out[0].label = "convergence_jam";
  out[1].label = "convergence_nojam";
  for (auto& r : out) r.axis = "alternating sweep";

  // One task per (trial, leg); each task owns a full AO trace.
  struct Slot {
    std::vector<TrialRow> rows;
  };
  std::vector<Slot> slots(2 * trials);
  parallel_for(2 * trials, [&](int task) {
    int t = task / 2;
    bool jamming = (task % 2) == 0;
    std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
    Rng rng(seed);
    ChannelSet ch = draw_channel_set(cfg.array, cfg.scene, cfg.fading,
                                     ReceiverModel::near_field, rng);
    AoResult ao = solve_p1(ch, cfg.limits, cfg.ao_settings(jamming, rm));
    auto& rows = slots[task].rows;
    if (!ao.feasible) {
      TrialResult tr;
      tr.feasible = false;
      tr.status = AoStatus::infeasible;
      rows.push_back(make_row(1.0, t, seed, tr));
      return;
    }
    for (const auto& rec : ao.trace.sweeps) {
      TrialRow row;
      row.sweep_value = rec.sweep;
      row.trial = t;
      row.seed = seed;
      row.rate_bits = rec.rate_bits;
      row.rate_user = rec.rate_user_bits;
      row.rate_eve = rec.rate_eve_bits;
      row.iters = rec.p3_iterations;
      row.status = to_string(ao.trace.status);
      rows.push_back(row);
    }
  });
  for (int task = 0; task < 2 * trials; ++task) {
    auto& dst = out[task % 2 == 0 ? 0 : 1].rows;
    dst.insert(dst.end(), slots[task].rows.begin(), slots[task].rows.end());
  }
  return out;
}

std::vector<SweepResult> run_distance_sweep(const ScenarioConfig& cfg,
                                            const std::vector<double>& eve_radii,
                                            double eve_azimuth, int trials,
                                            bool include_far_field,
                                            const std::string& label_suffix) {
  if (eve_radii.empty()) throw ConfigError("distance sweep needs radii");
  for (double r : eve_radii)
    if (r <= 0) throw ConfigError("eavesdropper radii must be positive");

  const ModeSpec leg_mode{RunMode::no_jamming, 3};
  const int legs = include_far_field ? 2 : 1;
  std::vector<SweepResult> out(legs);
  out[0].label = "distance_nf" + label_suffix;
  out[0].axis = "eavesdropper radius (m)";
  if (include_far_field) {
    out[1].label = "distance_ff" + label_suffix;
    out[1].axis = out[0].axis;
  }

  const int points = static_cast<int>(eve_radii.size());
  std::vector<TrialRow> rows(static_cast<std::size_t>(points) * trials * legs);
  parallel_for(points * trials * legs, [&](int task) {
    int leg = task % legs;
    int t = (task / legs) % trials;
    int p = task / (legs * trials);
    ScenarioConfig local = cfg;
    local.scene.eve.radius = eve_radii[p];
    local.scene.eve.azimuth = eve_azimuth;
    std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
    ReceiverModel model =
        leg == 0 ? ReceiverModel::near_field : ReceiverModel::far_field;
    TrialResult tr = run_trial(local, seed, leg_mode, model);
    rows[task] = make_row(eve_radii[p], t, seed, tr);
  });
  for (int task = 0; task < points * trials * legs; ++task)
    out[task % legs].rows.push_back(rows[task]);
  return out;
}

std::vector<SweepResult> run_element_sweep(
    const ScenarioConfig& cfg, const std::vector<std::pair<int, int>>& panels,
    const std::vector<ModeSpec>& modes, int trials) {
  if (panels.empty()) throw ConfigError("element sweep needs panel sizes");
  if (modes.empty()) throw ConfigError("element sweep needs modes");

  const int n_modes = static_cast<int>(modes.size());
  const int points = static_cast<int>(panels.size());
  std::vector<SweepResult> out(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    out[m].label = "elements_" + modes[m].name();
    out[m].axis = "reflecting elements";
  }

  std::vector<TrialRow> rows(static_cast<std::size_t>(points) * trials *
                             n_modes);
  parallel_for(points * trials * n_modes, [&](int task) {
    int m = task % n_modes;
    int t = (task / n_modes) % trials;
    int p = task / (n_modes * trials);
    ScenarioConfig local = cfg;
    local.array.ris_n1 = panels[p].first;
    local.array.ris_n2 = panels[p].second;
    double n_elements = local.array.ris_elements();
    std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
    TrialResult tr = run_trial(local, seed, modes[m]);
    rows[task] = make_row(n_elements, t, seed, tr);
  });
  for (int task = 0; task < points * trials * n_modes; ++task)
    out[task % n_modes].rows.push_back(rows[task]);
  return out;
}

std::vector<SweepResult> run_baseline(const ScenarioConfig& cfg,
                                      const std::vector<ModeSpec>& modes,
                                      int trials) {
  if (modes.empty()) throw ConfigError("baseline needs modes");
  const int n_modes = static_cast<int>(modes.size());
  std::vector<SweepResult> out(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    out[m].label = "baseline_" + modes[m].name();
    out[m].axis = "reflecting elements";
  }
  double n_elements = cfg.array.ris_elements();
  std::vector<TrialRow> rows(static_cast<std::size_t>(trials) * n_modes);
  parallel_for(trials * n_modes, [&](int task) {
    int m = task % n_modes;
    int t = task / n_modes;
    std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
    TrialResult tr = run_trial(cfg, seed, modes[m]);
    rows[task] = make_row(n_elements, t, seed, tr);
  });
  for (int task = 0; task < trials * n_modes; ++task)
    out[task % n_modes].rows.push_back(rows[task]);
  return out;
}

} // namespace xlris
