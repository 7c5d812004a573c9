#pragma once

#include <cstdint>
#include <string>

#include "xlris/ao.hpp"
#include "xlris/toml_lite.hpp"

namespace xlris {

// What a single trial optimizes and over which channel model.
enum class RunMode {
  continuous,  // jamming + continuous reflection phases
  discrete,    // jamming + quantized reflection phases
  stochastic,  // jamming + random fixed phases, precoders still optimized
  far_field,   // jamming + continuous phases on planar-wavefront channels
  no_jamming,  // continuous phases, jamming stream disabled
};

struct ModeSpec {
  RunMode mode = RunMode::continuous;
  int bits = 3;  // used by discrete only

  // Accepts: continuous | discrete:<b> | stochastic | ff | nojam.
  // Throws ConfigError on anything else.
  static ModeSpec parse(const std::string& text);
  std::string name() const;  // stable identifier used in file names
  bool with_jamming() const { return mode != RunMode::no_jamming; }
  ReceiverModel receiver_model() const {
    return mode == RunMode::far_field ? ReceiverModel::far_field
                                      : ReceiverModel::near_field;
  }
};

// Everything a run needs: physics, limits, solver knobs, trial plan. The
// built-in defaults describe the desk-scale setup (small panel, carrier
// chosen so both receivers sit inside the radiating near field).
struct ScenarioConfig {
  ArrayConfig array{4, 16, 4, 0.0, 1e9};
  SceneGeometry scene{};
  FadingParams fading{};
  NoiseAndLimits limits{};

  // Solver knobs (pinned defaults; scenario files may override).
  double ao_rate_tol_bits = 1e-3;
  int ao_max_sweeps = 100;
  double p2_rate_tol_bits = 1e-4;
  int p2_max_outer = 50;
  double admm_tol = 1e-4;
  int admm_max_iterations = 200;
  double penalty_init = 1.0;
  double kkt_tol = 1e-7;
  // Separate eavesdropper auxiliary rules per block: the verbatim barrier
  // rule behaves in the precoder block but sabotages the phase block (see
  // RisSettings::eve_aux).
  EveAuxRule eve_aux_precoder = EveAuxRule::barrier;
  EveAuxRule eve_aux_phase = EveAuxRule::mmse;

  // Trial plan; trials < 0 means "per-command default".
  ModeSpec mode{};
  int trials = -1;
  std::uint64_t base_seed = 1;

  AoSettings ao_settings(bool with_jamming, const RisMode& ris_mode) const;
  void validate() const;  // throws ConfigError
};

// Paper-scale geometry: 8 transmit antennas, 64 x 8 panel, 10 GHz carrier.
void apply_full_scale(ScenarioConfig& cfg);

// Empty path or empty file: pure defaults. Unknown sections or keys are
// config errors, as are out-of-range values.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_table(const TomlTable& table);

} // namespace xlris
