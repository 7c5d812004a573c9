#pragma once

#include "xlris/channel.hpp"

namespace xlris {

// Information and jamming transmit vectors. The jamming stream is canceled by
// the legitimate receiver (successive interference cancellation), which is
// only possible while the cancellation-ordering constraint holds.
struct Precoders {
  CVec info;  // M
  CVec jam;   // M, all-zero when jamming is disabled
  double total_power() const { return info.squaredNorm() + jam.squaredNorm(); }
};

// Unit-modulus reflection coefficients, stored as the plain complex vector v
// with v_n = e^{j phase_n}.
struct RisVector {
  CVec v;
  static RisVector all_ones(int n) { return {CVec::Ones(n)}; }
  double max_modulus_error() const;
};

struct NoiseAndLimits {
  double noise_user = dbm_to_watt(-80.0);   // sigma^2, watts
  double noise_eve = dbm_to_watt(-80.0);    // sigma_e^2, watts
  double power_budget = dbm_to_watt(10.0);  // watts
  double qos_sinr_min = 1.0;                // linear SINR floor at the user
};

// Effective surface->combined channels for fixed reflection coefficients:
// user = G^H diag(conj(v)) h and likewise for the eavesdropper, so that
// user^H w is the received information amplitude.
struct CascadedChannels {
  CVec user;  // M
  CVec eve;   // M
};

CascadedChannels cascade(const ChannelSet& ch, const RisVector& ris);

struct Rates {
  double user_bits = 0;
  double eve_bits = 0;
  double secrecy_bits = 0;  // clamped at zero
  // Unclamped difference, used by monotonicity guards where the clamp would
  // mask progress below zero.
  double gap_bits = 0;
};

double sinr_user(const CascadedChannels& cc, const Precoders& p,
                 const NoiseAndLimits& lim);
double sinr_eve(const CascadedChannels& cc, const Precoders& p,
                const NoiseAndLimits& lim);
Rates rates_and_secrecy(const CascadedChannels& cc, const Precoders& p,
                        const NoiseAndLimits& lim);

// Signed, normalized constraint slacks: positive means violated.
struct ConstraintReport {
  double power = 0;         // (used - budget) / budget
  double qos = 0;           // (floor - achieved SINR numerator) / floor scale
  double sic = 0;           // (info power - jam power at user) / info power
  double unit_modulus = 0;  // max | |v_n| - 1 |
  double tolerance = 1e-6;
  bool power_ok() const { return power <= tolerance; }
  bool qos_ok() const { return qos <= tolerance; }
  bool sic_ok() const { return sic <= tolerance; }
  bool unit_modulus_ok() const { return unit_modulus <= tolerance; }
  bool all_ok() const {
    return power_ok() && qos_ok() && sic_ok() && unit_modulus_ok();
  }
};

ConstraintReport check_constraints(const CascadedChannels& cc,
                                   const Precoders& p, const RisVector& ris,
                                   const NoiseAndLimits& lim,
                                   double tolerance = 1e-6,
                                   bool jamming_active = true);

} // namespace xlris
