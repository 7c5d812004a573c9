#include "xlris/secrecy.hpp"

#include <stdexcept>

namespace xlris {

double RisVector::max_modulus_error() const {
  double worst = 0;
  for (int i = 0; i < v.size(); ++i)
    worst = std::max(worst, std::abs(std::abs(v(i)) - 1.0));
  return worst;
}

CascadedChannels cascade(const ChannelSet& ch, const RisVector& ris) {
  if (ris.v.size() != ch.bs_ris.rows())
    throw std::invalid_argument("reflection vector length != element count");
  if (ch.user.size() != ch.bs_ris.rows() || ch.eve.size() != ch.bs_ris.rows())
    throw std::invalid_argument("receiver channel length != element count");
  CVec vu = ris.v.conjugate().cwiseProduct(ch.user);
  CVec ve = ris.v.conjugate().cwiseProduct(ch.eve);
  return {ch.bs_ris.adjoint() * vu, ch.bs_ris.adjoint() * ve};
}

double sinr_user(const CascadedChannels& cc, const Precoders& p,
                 const NoiseAndLimits& lim) {
  // The jamming stream is decoded first and subtracted, so only thermal noise
  // remains in the user's SINR.
  return std::norm(cc.user.dot(p.info)) / lim.noise_user;
}

double sinr_eve(const CascadedChannels& cc, const Precoders& p,
                const NoiseAndLimits& lim) {
  double jam_power = p.jam.size() ? std::norm(cc.eve.dot(p.jam)) : 0.0;
  return std::norm(cc.eve.dot(p.info)) / (jam_power + lim.noise_eve);
}

Rates rates_and_secrecy(const CascadedChannels& cc, const Precoders& p,
                        const NoiseAndLimits& lim) {
  Rates r;
  r.user_bits = std::log2(1.0 + sinr_user(cc, p, lim));
  r.eve_bits = std::log2(1.0 + sinr_eve(cc, p, lim));
  r.gap_bits = r.user_bits - r.eve_bits;
  r.secrecy_bits = std::max(0.0, r.gap_bits);
  return r;
}

ConstraintReport check_constraints(const CascadedChannels& cc,
                                   const Precoders& p, const RisVector& ris,
                                   const NoiseAndLimits& lim, double tolerance,
                                   bool jamming_active) {
  ConstraintReport rep;
  rep.tolerance = tolerance;
  rep.power = (p.total_power() - lim.power_budget) / lim.power_budget;

  double info_at_user = std::norm(cc.user.dot(p.info));
  double qos_floor = lim.qos_sinr_min * lim.noise_user;
  rep.qos = (qos_floor - info_at_user) / std::max(qos_floor, 1e-300);

  if (jamming_active) {
    double jam_at_user = std::norm(cc.user.dot(p.jam));
    rep.sic = (info_at_user - jam_at_user) / std::max(info_at_user, 1e-300);
  } else {
    rep.sic = 0.0;
  }
  rep.unit_modulus = ris.max_modulus_error();
  return rep;
}

} // namespace xlris
