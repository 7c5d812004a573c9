#include "xlris/scenario.hpp"

#include <algorithm>
#include <set>

namespace xlris {

ModeSpec ModeSpec::parse(const std::string& text) {
  if (text == "continuous") return {RunMode::continuous, 3};
  if (text == "stochastic") return {RunMode::stochastic, 3};
  if (text == "ff") return {RunMode::far_field, 3};
  if (text == "nojam") return {RunMode::no_jamming, 3};
  if (text.rfind("discrete:", 0) == 0) {
    std::string rest = text.substr(9);
    if (!rest.empty() &&
        std::all_of(rest.begin(), rest.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      int b = std::stoi(rest);
      if (b >= 1 && b <= 16) return {RunMode::discrete, b};
    }
    throw ConfigError("bad discrete mode '" + text + "' (use discrete:<bits>)");
  }
  throw ConfigError("unknown mode '" + text +
                    "' (continuous|discrete:<b>|stochastic|ff|nojam)");
}

std::string ModeSpec::name() const {
  switch (mode) {
    case RunMode::continuous: return "continuous";
    case RunMode::discrete: return "b" + std::to_string(bits);
    case RunMode::stochastic: return "stochastic";
    case RunMode::far_field: return "ff";
    case RunMode::no_jamming: return "nojam";
  }
  return "unknown";
}

AoSettings ScenarioConfig::ao_settings(bool with_jamming,
                                       const RisMode& ris_mode) const {
  AoSettings s;
  s.rate_tol_bits = ao_rate_tol_bits;
  s.max_sweeps = ao_max_sweeps;
  s.with_jamming = with_jamming;
  s.mode = ris_mode;

  s.p2.rate_tol_bits = p2_rate_tol_bits;
  s.p2.max_outer = p2_max_outer;
  s.p2.eve_aux = eve_aux_precoder;
  s.p2.qcqp.kkt_tol = kkt_tol;

  s.p3.admm_tol = admm_tol;
  s.p3.rate_tol_bits = p2_rate_tol_bits;
  s.p3.max_iterations = admm_max_iterations;
  s.p3.penalty_init = penalty_init;
  // The mmse fallback for the phase block exists because the barrier
  // weighting penalizes jam power seen by the eavesdropper, which wrecks the
  // phase geometry when a jam precoder is present. Without jamming that term
  // is absent and the barrier's eavesdropper pull is exactly what the phase
  // block needs, so the fallback only applies to jamming-enabled runs.
  s.p3.eve_aux = with_jamming ? eve_aux_phase : eve_aux_precoder;
  s.p3.qcqp.kkt_tol = kkt_tol;
  return s;
}

void ScenarioConfig::validate() const {
  try {
    array.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (limits.noise_user <= 0 || limits.noise_eve <= 0)
    throw ConfigError("noise powers must be positive");
  if (limits.power_budget <= 0) throw ConfigError("power budget must be positive");
  if (limits.qos_sinr_min < 0) throw ConfigError("qos floor must be >= 0");
  if (scene.user.radius <= 0 || scene.eve.radius <= 0)
    throw ConfigError("receiver radii must be positive");
  if (fading.beta0 <= 0) throw ConfigError("beta0 must be positive");
  if (fading.rician_k < 0) throw ConfigError("rician k must be >= 0");
  if (fading.gain_std < 0) throw ConfigError("gain_std must be >= 0");
  if (trials == 0 || trials < -1) throw ConfigError("trials must be >= 1");
  if (ao_max_sweeps < 1 || p2_max_outer < 1 || admm_max_iterations < 1)
    throw ConfigError("iteration limits must be >= 1");
  if (ao_rate_tol_bits <= 0 || p2_rate_tol_bits <= 0 || admm_tol <= 0 ||
      kkt_tol <= 0 || penalty_init <= 0)
    throw ConfigError("tolerances must be positive");
  if (mode.mode == RunMode::discrete && (mode.bits < 1 || mode.bits > 16))
    throw ConfigError("discrete bits must be in [1, 16]");
}

void apply_full_scale(ScenarioConfig& cfg) {
  cfg.array.bs_antennas = 8;
  cfg.array.ris_n1 = 64;
  cfg.array.ris_n2 = 8;
  cfg.array.carrier_hz = 1e10;
}

namespace {

const std::set<std::pair<std::string, std::string>>& known_keys() {
  static const std::set<std::pair<std::string, std::string>> keys = {
      {"", "mode"},
      {"", "trials"},
      {"", "seed"},
      {"array", "bs_antennas"},
      {"array", "ris_n1"},
      {"array", "ris_n2"},
      {"array", "element_spacing"},
      {"array", "carrier_hz"},
      {"geometry", "bs_x"},
      {"geometry", "bs_y"},
      {"geometry", "bs_z"},
      {"geometry", "user_radius"},
      {"geometry", "user_azimuth"},
      {"geometry", "eve_radius"},
      {"geometry", "eve_azimuth"},
      {"geometry", "bs_ula_offset"},
      {"fading", "beta0_db"},
      {"fading", "pathloss_exp"},
      {"fading", "rician_k_db"},
      {"fading", "gain_mean"},
      {"fading", "gain_std"},
      {"limits", "noise_user_dbm"},
      {"limits", "noise_eve_dbm"},
      {"limits", "power_budget_dbm"},
      {"limits", "qos_sinr_min"},
      {"solver", "ao_rate_tol_bits"},
      {"solver", "ao_max_sweeps"},
      {"solver", "p2_rate_tol_bits"},
      {"solver", "p2_max_outer"},
      {"solver", "admm_tol"},
      {"solver", "admm_max_iterations"},
      {"solver", "penalty_init"},
      {"solver", "kkt_tol"},
      {"solver", "eve_aux_precoder"},
      {"solver", "eve_aux_phase"},
  };
  return keys;
}

} // namespace

ScenarioConfig scenario_from_table(const TomlTable& t) {
  for (const auto& entry : t.entries())
    if (!known_keys().count(entry))
      throw ConfigError("unknown scenario key '" +
                        (entry.first.empty() ? entry.second
                                             : entry.first + "." + entry.second) +
                        "'");

  ScenarioConfig c;
  c.array.bs_antennas =
      static_cast<int>(t.integer("array", "bs_antennas", c.array.bs_antennas));
  c.array.ris_n1 = static_cast<int>(t.integer("array", "ris_n1", c.array.ris_n1));
  c.array.ris_n2 = static_cast<int>(t.integer("array", "ris_n2", c.array.ris_n2));
  c.array.element_spacing =
      t.number("array", "element_spacing", c.array.element_spacing);
  c.array.carrier_hz = t.number("array", "carrier_hz", c.array.carrier_hz);

  c.scene.bs_position.x = t.number("geometry", "bs_x", c.scene.bs_position.x);
  c.scene.bs_position.y = t.number("geometry", "bs_y", c.scene.bs_position.y);
  c.scene.bs_position.z = t.number("geometry", "bs_z", c.scene.bs_position.z);
  c.scene.user.radius = t.number("geometry", "user_radius", c.scene.user.radius);
  c.scene.user.azimuth =
      t.number("geometry", "user_azimuth", c.scene.user.azimuth);
  c.scene.eve.radius = t.number("geometry", "eve_radius", c.scene.eve.radius);
  c.scene.eve.azimuth = t.number("geometry", "eve_azimuth", c.scene.eve.azimuth);
  c.scene.bs_ula_offset =
      t.number("geometry", "bs_ula_offset", c.scene.bs_ula_offset);

  c.fading.beta0 = db_to_linear(t.number("fading", "beta0_db", -30.0));
  c.fading.pathloss_exp =
      t.number("fading", "pathloss_exp", c.fading.pathloss_exp);
  c.fading.rician_k = db_to_linear(t.number("fading", "rician_k_db", 3.0));
  c.fading.gain_mean = t.number("fading", "gain_mean", c.fading.gain_mean);
  c.fading.gain_std = t.number("fading", "gain_std", c.fading.gain_std);

  c.limits.noise_user = dbm_to_watt(t.number("limits", "noise_user_dbm", -80.0));
  c.limits.noise_eve = dbm_to_watt(t.number("limits", "noise_eve_dbm", -80.0));
  c.limits.power_budget =
      dbm_to_watt(t.number("limits", "power_budget_dbm", 10.0));
  c.limits.qos_sinr_min =
      t.number("limits", "qos_sinr_min", c.limits.qos_sinr_min);

  c.ao_rate_tol_bits = t.number("solver", "ao_rate_tol_bits", c.ao_rate_tol_bits);
  c.ao_max_sweeps =
      static_cast<int>(t.integer("solver", "ao_max_sweeps", c.ao_max_sweeps));
  c.p2_rate_tol_bits = t.number("solver", "p2_rate_tol_bits", c.p2_rate_tol_bits);
  c.p2_max_outer =
      static_cast<int>(t.integer("solver", "p2_max_outer", c.p2_max_outer));
  c.admm_tol = t.number("solver", "admm_tol", c.admm_tol);
  c.admm_max_iterations = static_cast<int>(
      t.integer("solver", "admm_max_iterations", c.admm_max_iterations));
  c.penalty_init = t.number("solver", "penalty_init", c.penalty_init);
  c.kkt_tol = t.number("solver", "kkt_tol", c.kkt_tol);
  auto parse_aux = [&](const char* key, EveAuxRule fallback) {
    std::string aux =
        t.str("solver", key, fallback == EveAuxRule::barrier ? "barrier" : "mmse");
    if (aux == "barrier") return EveAuxRule::barrier;
    if (aux == "mmse") return EveAuxRule::mmse;
    throw ConfigError(std::string("solver.") + key +
                      " must be 'barrier' or 'mmse'");
  };
  c.eve_aux_precoder = parse_aux("eve_aux_precoder", c.eve_aux_precoder);
  c.eve_aux_phase = parse_aux("eve_aux_phase", c.eve_aux_phase);

  c.mode = ModeSpec::parse(t.str("", "mode", "continuous"));
  c.trials = static_cast<int>(t.integer("", "trials", -1));
  long long seed = t.integer("", "seed", 1);
  if (seed < 0) throw ConfigError("seed must be >= 0");
  c.base_seed = static_cast<std::uint64_t>(seed);

  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  if (path.empty()) {
    ScenarioConfig c;
    c.validate();
    return c;
  }
  return scenario_from_table(TomlTable::parse_file(path));
}

} // namespace xlris
