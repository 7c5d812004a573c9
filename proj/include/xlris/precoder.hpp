#pragma once

#include "xlris/qcqp.hpp"
#include "xlris/secrecy.hpp"

namespace xlris {

// Scalar auxiliaries of the weighted-MMSE reformulation: one equalizer and
// one positive weight per receiver. The eavesdropper pair follows the
// jamming-aware update in which the equalizer targets the jamming stream, so
// weight_eve = 1 / (1 - sinr_eve); that expression blows up as the tap
// approaches unity, which is exactly what pushes the design away from leaky
// solutions. Weights are clamped into [weight_floor, weight_cap] whenever the
// closed form leaves the positive range.
struct WmmseAux {
  cplx eq_user;       // u_u
  cplx eq_eve;        // u_e
  double weight_user; // rho_u
  double weight_eve;  // rho_e
  bool clamped = false;
};

// Equalizer rule for the eavesdropper branch. `barrier` is the jamming-aware
// closed form described above; `mmse` is the conventional MMSE equalizer on
// the information stream, kept as a fallback for experiments.
enum class EveAuxRule { barrier, mmse };

WmmseAux update_aux(const CascadedChannels& cc, const Precoders& p,
                    const NoiseAndLimits& lim,
                    EveAuxRule rule = EveAuxRule::barrier,
                    double weight_floor = 1e-6, double weight_cap = 1e6);

// Surrogate cost (natural-log units) whose minimum over the auxiliaries
// recovers -ln(1+sinr_u) plus the eavesdropper penalty. Lower is better.
double surrogate_objective(const CascadedChannels& cc, const Precoders& p,
                           const NoiseAndLimits& lim, const WmmseAux& aux);

// First-order inner approximations of the nonconvex constraints, anchored at
// the current iterate. Both are tight at the anchor and conservative
// elsewhere (they imply the true constraint).
struct QosHalfspace {
  CVec a;      // Re{a^H w} >= b, in the information precoder block
  double b = 0;
};
struct SicSurrogate {
  CMat P;      // w^H P w <= Re{a^H w_jam} + b
  CVec a;
  double b = 0;
};

QosHalfspace linearize_qos(const Precoders& anchor, const CascadedChannels& cc,
                           const NoiseAndLimits& lim);
SicSurrogate linearize_sic(const Precoders& anchor, const CascadedChannels& cc);

struct PrecoderSettings {
  double rate_tol_bits = 1e-4;
  int max_outer = 50;
  double weight_floor = 1e-6;
  double weight_cap = 1e6;
  EveAuxRule eve_aux = EveAuxRule::barrier;
  bool with_jamming = true;  // false drops the jamming stream and the
                             // cancellation-ordering constraint
  double monotone_tol = 1e-9;
  int max_step_halvings = 20;
  SolverSettings qcqp;
};

struct P2Diagnostics {
  int outer_iterations = 0;
  bool feasible = true;
  bool restarted = false;          // re-initialized after a degenerate anchor
  int clamped_weight_updates = 0;
  std::vector<double> rate_trace_bits;  // secrecy rate after each iteration
};

// Feasible starting point for the given effective channels: information
// precoder matched to the user, jamming in the orthogonal complement, powers
// split to satisfy both the QoS floor and the cancellation ordering. Returns
// nullopt when even full-power jamming-free transmission cannot reach the QoS
// floor (resp. half power with jamming).
std::optional<Precoders> default_precoder_init(const CascadedChannels& cc,
                                               const NoiseAndLimits& lim,
                                               bool with_jamming);

struct P2Result {
  Precoders precoders;
  P2Diagnostics diagnostics;
};

// Alternating surrogate/solve loop for the transmit-side subproblem at fixed
// reflection coefficients. Monotone in the true secrecy rate up to
// monotone_tol thanks to step damping; never returns a worse point than a
// feasible init.
P2Result solve_p2(const ChannelSet& ch, const RisVector& ris,
                  const NoiseAndLimits& lim, const Precoders& init,
                  const PrecoderSettings& settings = {});

} // namespace xlris
