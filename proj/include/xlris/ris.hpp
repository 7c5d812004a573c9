#pragma once

#include "xlris/precoder.hpp"

namespace xlris {

// Uniform phase grid {-pi + k * 2pi/2^b}. Quantization is O(1) per element
// with exact ties broken toward the smaller phase; +pi wraps to -pi.
struct PhaseAlphabet {
  int bits = 3;
  int size() const { return 1 << bits; }
  double step() const { return 2.0 * kPi / size(); }
  std::vector<double> levels() const;
  double round_phase(double phase) const;
  void validate() const;  // throws std::invalid_argument unless 1 <= bits <= 16
};

struct RisMode {
  bool discrete = false;
  int bits = 3;  // used only when discrete
};

// Splitting state: the relaxed copy is unconstrained, the projected copy
// lives on the unit circle (or the phase grid), and the scaled dual tracks
// their disagreement.
struct AdmmState {
  CVec relaxed;
  CVec projected;
  CVec dual;
  double penalty = 1.0;
  int iteration = 0;
};

// Per-element cascade coefficients: with reflection vector v, the received
// amplitude of stream s at receiver r is v^T coeff(r, s).
struct CascadeCoefficients {
  CVec user_info;
  CVec user_jam;
  CVec eve_info;
  CVec eve_jam;
};

CascadeCoefficients cascade_coefficients(const ChannelSet& ch,
                                         const Precoders& p);

struct ThetaUpdateResult {
  CVec theta;
  SolverStatus status = SolverStatus::optimal;
  int solver_iterations = 0;
};

// Relaxed-variable subproblem: weighted-MMSE surrogate in the reflection
// vector plus the proximity penalty toward (projected + dual), under the
// linearized QoS and cancellation-ordering constraints anchored at `anchor`.
ThetaUpdateResult theta_update(const CascadeCoefficients& coeffs,
                               const NoiseAndLimits& lim, const WmmseAux& aux,
                               const CVec& penalty_target, double penalty,
                               const CVec& anchor, const CVec& warm_start,
                               const SolverSettings& qcqp = {});

// Elementwise nearest point on the unit circle of (relaxed - dual); an exact
// zero maps to phase 0 and an exactly unit-modulus entry passes through.
CVec project_unit_modulus(const CVec& relaxed, const CVec& dual);
CVec project_unit_modulus(const AdmmState& s);

// Discrete counterpart: per element the grid phase closest to
// arg(relaxed_n - dual_n), which maximizes Re{conj(relaxed-dual) e^{j phi}}
// over the alphabet without scanning it.
CVec discrete_line_search(const CVec& relaxed, const CVec& dual,
                          const PhaseAlphabet& alphabet);
CVec discrete_line_search(const AdmmState& s, const PhaseAlphabet& alphabet);

// nu <- nu - relaxed + projected, exactly.
CVec dual_update(const CVec& dual, const CVec& relaxed, const CVec& projected);

struct RisSettings {
  double admm_tol = 1e-4;       // max-norm split residual
  double rate_tol_bits = 1e-4;
  int max_iterations = 200;
  double penalty_init = 1.0;
  double residual_balance = 10.0;
  double monotone_tol = 1e-9;
  double constraint_tol = 1e-6;
  // The verbatim eavesdropper auxiliary rule (EveAuxRule::barrier) turns the
  // phase subproblem into an attractor toward SINR_e = 1: its quadratic pulls
  // the eavesdropper tap toward the barrier from either side and penalizes
  // jamming power received by the eavesdropper, which measurably destroys the
  // true rate in this block. The matched-MMSE rule keeps the eavesdropper
  // term properly weighted, so it is the default here; precoder_opt keeps the
  // verbatim rule.
  EveAuxRule eve_aux = EveAuxRule::mmse;
  double weight_floor = 1e-6;
  double weight_cap = 1e6;
  SolverSettings qcqp;
};

struct P3Diagnostics {
  int iterations = 0;
  double primal_residual = 0;
  double final_penalty = 0;
  bool improved = false;
  int theta_solver_failures = 0;
  std::vector<double> rate_trace_bits;           // raw rate at each projected iterate
  std::vector<double> accepted_rate_trace_bits;  // monotone accepted track
  std::vector<double> theta_update_seconds;      // wall time per relaxed solve
};

struct P3Result {
  RisVector ris;
  P3Diagnostics diagnostics;
};

// Reflection-coefficient subproblem at fixed precoders. Returns the best
// projected iterate seen; monotone in the true secrecy rate up to
// monotone_tol, and never below the rate of the init.
P3Result solve_p3(const ChannelSet& ch, const Precoders& p,
                  const NoiseAndLimits& lim, const RisVector& init,
                  const RisMode& mode, const RisSettings& settings = {});

} // namespace xlris
