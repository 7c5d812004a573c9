#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "xlris/outputs.hpp"
#include "xlris/scenario.hpp"

namespace xlris {

struct TrialResult {
  Rates rates;
  int iterations = 0;  // AO sweeps (or transmit-solver iterations when the
                       // reflection phases are fixed)
  AoStatus status = AoStatus::converged;
  bool feasible = true;
};

// One Monte Carlo draw end to end. Trial t of every sweep uses seed
// base_seed + t, so runs are paired across modes and sweep legs.
// model_override replaces the wavefront model implied by the mode (the
// distance sweep uses it to pair near/far legs on identical draws);
// jamming_override does the same for the jamming stream.
TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed,
                      const ModeSpec& mode,
                      std::optional<ReceiverModel> model_override = {},
                      std::optional<bool> jamming_override = {});

// Random reflection phases from a decoupled substream (the channel draw stays
// identical to the other modes at the same seed), precoders still optimized.
TrialResult run_stochastic_phase_trial(const ScenarioConfig& cfg,
                                       std::uint64_t seed);

// Secrecy rate per alternating sweep, with and without the jamming stream,
// on paired channel draws. Labels: convergence_jam, convergence_nojam.
std::vector<SweepResult> run_convergence(const ScenarioConfig& cfg, int trials);

// Secrecy rate as the eavesdropper moves along a ray at eve_azimuth, user
// fixed. Both legs run without jamming: with the jamming stream active the
// eavesdropper rate is pinned near one bit regardless of position, which
// hides exactly the geometry effect this sweep exists to show. The spherical
// and planar wavefront legs are paired draw for draw.
std::vector<SweepResult> run_distance_sweep(const ScenarioConfig& cfg,
                                            const std::vector<double>& eve_radii,
                                            double eve_azimuth, int trials,
                                            bool include_far_field = true,
                                            const std::string& label_suffix = "");

// Secrecy rate against panel size for each requested mode, paired per trial.
std::vector<SweepResult> run_element_sweep(
    const ScenarioConfig& cfg, const std::vector<std::pair<int, int>>& panels,
    const std::vector<ModeSpec>& modes, int trials);

// Fixed-geometry comparison across modes (one sweep point per mode result).
std::vector<SweepResult> run_baseline(const ScenarioConfig& cfg,
                                      const std::vector<ModeSpec>& modes,
                                      int trials);

// Scenario override if present, otherwise the per-command default.
int default_trials(const ScenarioConfig& cfg, int command_default);

// Deterministic task runner: results land in caller-owned slots indexed by
// task id, so the schedule cannot change output order. Honors XLRIS_THREADS.
void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace xlris
