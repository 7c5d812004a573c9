#pragma once

#include "xlris/ris.hpp"

namespace xlris {

struct AoIterationRecord {
  int sweep = 0;
  double rate_bits = 0;  // clamped secrecy rate after the sweep
  double rate_user_bits = 0;
  double rate_eve_bits = 0;
  double p2_seconds = 0;
  double p3_seconds = 0;
  int p2_iterations = 0;
  int p3_iterations = 0;
  bool constraints_ok = true;
};

enum class AoStatus { converged, max_sweeps, infeasible };

const char* to_string(AoStatus s);

struct AoTrace {
  std::vector<AoIterationRecord> sweeps;
  AoStatus status = AoStatus::converged;
};

struct AoSettings {
  double rate_tol_bits = 1e-3;
  int max_sweeps = 100;
  bool with_jamming = true;
  RisMode mode;
  PrecoderSettings p2;
  RisSettings p3;
};

struct AoResult {
  Precoders precoders;
  RisVector ris;
  Rates rates;
  AoTrace trace;
  bool feasible = true;
};

// Full alternating loop: transmit subproblem, then reflection subproblem,
// starting from uniform reflection and the matched-filter power split.
// Returns the best iterate seen (the stages are individually monotone, so
// this is the last one up to the guard tolerance).
AoResult solve_p1(const ChannelSet& ch, const NoiseAndLimits& lim,
                  const AoSettings& settings = {});

// Closed-form feasibility precheck at a fixed reflection vector: the QoS
// floor must be reachable with the full budget (or half of it when the
// jamming stream has to stay on top).
bool draw_feasible(const ChannelSet& ch, const RisVector& ris,
                   const NoiseAndLimits& lim, bool with_jamming);

struct StageCost {
  double p2_seconds_per_sweep = 0;
  double p3_seconds_per_sweep = 0;
  int sweeps = 0;
};

// Mean per-sweep stage costs. Throws std::invalid_argument on an empty trace.
StageCost complexity_report(const AoTrace& trace);

// Least-squares slope of log(seconds) against log(size). Throws
// std::invalid_argument without at least two distinct positive sizes.
double fit_power_law_exponent(const std::vector<double>& sizes,
                              const std::vector<double>& seconds);

} // namespace xlris
