#include "xlris/precoder.hpp"

#include <stdexcept>

namespace xlris {

namespace {

// Clamp a weight into the positive range; flags the instance so callers can
// tell the closed form left its domain. A non-positive value means the
// eavesdropper tap reached or passed unity; mapping it to the floor removes
// that branch from the surrogate instead of letting a negative weight flip
// the objective sign.
double clamp_weight(double w, double lo, double hi, bool* clamped) {
  if (!std::isfinite(w)) { *clamped = true; return w > 0 ? hi : lo; }
  if (w <= 0) { *clamped = true; return lo; }
  if (w < lo) { *clamped = true; return lo; }
  if (w > hi) { *clamped = true; return hi; }
  return w;
}

} // namespace

WmmseAux update_aux(const CascadedChannels& cc, const Precoders& p,
                    const NoiseAndLimits& lim, EveAuxRule rule,
                    double weight_floor, double weight_cap) {
  const cplx j(0.0, 1.0);
  cplx y_u = cc.user.dot(p.info);
  cplx y_e = cc.eve.dot(p.info);
  cplx y_je = p.jam.size() ? cc.eve.dot(p.jam) : cplx(0, 0);

  WmmseAux aux;
  aux.eq_user = y_u / (std::norm(y_u) + lim.noise_user);
  double err_u = 1.0 - (std::conj(aux.eq_user) * y_u).real();
  aux.weight_user =
      clamp_weight(1.0 / err_u, weight_floor, weight_cap, &aux.clamped);

  double jam_plus_noise = std::norm(y_je) + lim.noise_eve;
  double total_eve = std::norm(y_e) + jam_plus_noise;
  aux.eq_eve = (rule == EveAuxRule::barrier) ? j * y_e / jam_plus_noise
                                             : j * y_e / total_eve;
  double err_e = 1.0 - (std::conj(aux.eq_eve) * j * y_e).real();
  // The barrier error 1 - SINR_e' is only positive inside the barrier's
  // domain. When an iterate sits outside it (eavesdropper SINR at or above
  // the jam-plus-noise level, routine without jamming), the reciprocal
  // weight would go nonpositive and the clamp below would silence exactly
  // the term that can push that SINR back down. Saturating the error keeps
  // a strong, finite pull toward the domain instead.
  if (rule == EveAuxRule::barrier) err_e = std::max(err_e, 1e-2);
  aux.weight_eve =
      clamp_weight(1.0 / err_e, weight_floor, weight_cap, &aux.clamped);
  return aux;
}

double surrogate_objective(const CascadedChannels& cc, const Precoders& p,
                           const NoiseAndLimits& lim, const WmmseAux& aux) {
  const cplx j(0.0, 1.0);
  cplx y_u = cc.user.dot(p.info);
  cplx y_e = cc.eve.dot(p.info);
  cplx y_je = p.jam.size() ? cc.eve.dot(p.jam) : cplx(0, 0);

  double f_u = std::norm(aux.eq_user) * (std::norm(y_u) + lim.noise_user) -
               2.0 * (std::conj(aux.eq_user) * y_u).real() + 1.0;
  double f_e =
      std::norm(aux.eq_eve) *
          (std::norm(y_e) + std::norm(y_je) + lim.noise_eve) -
      2.0 * (std::conj(aux.eq_eve) * j * y_e).real() + 1.0;
  return aux.weight_user * f_u - std::log(aux.weight_user) +
         aux.weight_eve * f_e - std::log(aux.weight_eve);
}

QosHalfspace linearize_qos(const Precoders& anchor, const CascadedChannels& cc,
                           const NoiseAndLimits& lim) {
  cplx tap = cc.user.dot(anchor.info);  // h_u^H w at the anchor
  QosHalfspace h;
  h.a = 2.0 * tap * cc.user;
  h.b = lim.qos_sinr_min * lim.noise_user + std::norm(tap);
  return h;
}

SicSurrogate linearize_sic(const Precoders& anchor,
                           const CascadedChannels& cc) {
  cplx tap = cc.user.dot(anchor.jam);  // h_u^H w_jam at the anchor
  SicSurrogate s;
  s.P = cc.user * cc.user.adjoint();
  s.a = 2.0 * tap * cc.user;
  s.b = -std::norm(tap);
  return s;
}

std::optional<Precoders> default_precoder_init(const CascadedChannels& cc,
                                               const NoiseAndLimits& lim,
                                               bool with_jamming) {
  const int m = static_cast<int>(cc.user.size());
  double gain = cc.user.squaredNorm();
  if (gain <= 0) return std::nullopt;
  double qos_floor = lim.qos_sinr_min * lim.noise_user;
  CVec dir_info = cc.user / cc.user.norm();

  if (!with_jamming) {
    if (lim.power_budget * gain < qos_floor) return std::nullopt;
    Precoders p;
    p.info = std::sqrt(lim.power_budget) * dir_info;
    p.jam = CVec::Zero(m);
    return p;
  }

  // Jamming must dominate the information stream at the user for the
  // cancellation ordering; at best (jamming aligned with the user channel)
  // that leaves half the budget for information.
  if (0.5 * lim.power_budget * gain < qos_floor) return std::nullopt;

  const double margin = 1.0 + 1e-6;
  // Preferred jamming direction: the part of the user channel invisible to
  // the eavesdropper, so the init leaks nothing into the eve link.
  CVec dir_jam = cc.user;
  double eve_gain = cc.eve.squaredNorm();
  if (eve_gain > 0) {
    CVec proj = cc.eve * (cc.eve.dot(cc.user) / eve_gain);
    dir_jam = cc.user - proj;
  }
  double ortho = dir_jam.squaredNorm();
  if (ortho > 1e-12 * gain) {
    dir_jam /= std::sqrt(ortho);
    // |user^H dir_jam|^2 = ortho; balance powers so jamming stays on top.
    double ratio = margin * gain / ortho;  // required p_jam / p_info
    double p_info = lim.power_budget / (1.0 + ratio);
    if (p_info * gain >= qos_floor) {
      Precoders p;
      p.info = std::sqrt(p_info) * dir_info;
      p.jam = std::sqrt(lim.power_budget - p_info) * dir_jam;
      return p;
    }
  }
  // Fallback: jam along the user channel with an even split.
  double p_info = lim.power_budget / (1.0 + margin);
  if (p_info * gain < qos_floor) return std::nullopt;
  Precoders p;
  p.info = std::sqrt(p_info) * dir_info;
  p.jam = std::sqrt(lim.power_budget - p_info) * dir_info;
  return p;
}

namespace {

// Stacked subproblem over x = [info; jam] (or just info without jamming):
// surrogate objective, power ball, linearized QoS and ordering constraints.
QcqpProblem build_p2_problem(const CascadedChannels& cc,
                             const NoiseAndLimits& lim, const WmmseAux& aux,
                             const Precoders& anchor, bool with_jamming) {
  const cplx j(0.0, 1.0);
  const int m = static_cast<int>(cc.user.size());
  const int dim = with_jamming ? 2 * m : m;

  CMat hu = cc.user * cc.user.adjoint();
  CMat he = cc.eve * cc.eve.adjoint();
  double cu = aux.weight_user * std::norm(aux.eq_user);
  double ce = aux.weight_eve * std::norm(aux.eq_eve);

  QcqpProblem prob;
  prob.dim = dim;
  prob.Q = CMat::Zero(dim, dim);
  prob.Q.topLeftCorner(m, m) = cu * hu + ce * he;
  if (with_jamming) prob.Q.bottomRightCorner(m, m) = ce * he;
  prob.c = CVec::Zero(dim);
  prob.c.head(m) = -2.0 * aux.weight_user * aux.eq_user * cc.user +
                   2.0 * j * aux.weight_eve * aux.eq_eve * cc.eve;
  prob.constant = cu * lim.noise_user + ce * lim.noise_eve +
                  aux.weight_user + aux.weight_eve -
                  std::log(aux.weight_user) - std::log(aux.weight_eve);
  prob.ball_radius_sq = lim.power_budget;

  QosHalfspace qos = linearize_qos(anchor, cc, lim);
  QcqpProblem::Affine af;
  af.a = CVec::Zero(dim);
  af.a.head(m) = qos.a;
  af.b = qos.b;
  prob.affine.push_back(std::move(af));

  if (with_jamming) {
    SicSurrogate sic = linearize_sic(anchor, cc);
    QcqpProblem::Quadratic qd;
    qd.P = CMat::Zero(dim, dim);
    qd.P.topLeftCorner(m, m) = sic.P;
    qd.a = CVec::Zero(dim);
    qd.a.tail(m) = sic.a;
    qd.b = sic.b;
    prob.quadratic.push_back(std::move(qd));
  }
  return prob;
}

CVec stack(const Precoders& p, bool with_jamming) {
  if (!with_jamming) return p.info;
  CVec x(p.info.size() + p.jam.size());
  x << p.info, p.jam;
  return x;
}

Precoders unstack(const CVec& x, int m, bool with_jamming) {
  Precoders p;
  p.info = x.head(m);
  p.jam = with_jamming ? CVec(x.tail(m)) : CVec(CVec::Zero(m));
  return p;
}

bool truly_feasible(const CascadedChannels& cc, const Precoders& p,
                    const NoiseAndLimits& lim, bool with_jamming) {
  RisVector dummy{CVec::Ones(1)};
  ConstraintReport rep =
      check_constraints(cc, p, dummy, lim, 1e-6, with_jamming);
  return rep.power_ok() && rep.qos_ok() && rep.sic_ok();
}

} // namespace

P2Result solve_p2(const ChannelSet& ch, const RisVector& ris,
                  const NoiseAndLimits& lim, const Precoders& init,
                  const PrecoderSettings& settings) {
  const int m = static_cast<int>(ch.bs_ris.cols());
  CascadedChannels cc = cascade(ch, ris);

  P2Result res;
  res.precoders = init;
  if (!settings.with_jamming) res.precoders.jam = CVec::Zero(m);

  // Repair an infeasible start; if no feasible point exists for this draw,
  // report and return unchanged.
  if (!truly_feasible(cc, res.precoders, lim, settings.with_jamming)) {
    auto d = default_precoder_init(cc, lim, settings.with_jamming);
    if (!d) {
      res.diagnostics.feasible = false;
      return res;
    }
    res.precoders = *d;
  }

  double rate_cur = rates_and_secrecy(cc, res.precoders, lim).gap_bits;
  res.diagnostics.rate_trace_bits.push_back(std::max(0.0, rate_cur));

  bool restart_used = false;
  for (int outer = 0; outer < settings.max_outer; ++outer) {
    res.diagnostics.outer_iterations = outer + 1;
    WmmseAux aux = update_aux(cc, res.precoders, lim, settings.eve_aux,
                              settings.weight_floor, settings.weight_cap);
    if (aux.clamped) ++res.diagnostics.clamped_weight_updates;

    QcqpProblem prob =
        build_p2_problem(cc, lim, aux, res.precoders, settings.with_jamming);
    CVec warm = stack(res.precoders, settings.with_jamming);
    SolverReport rep = solve(prob, settings.qcqp, &warm);
    if (!rep.ok()) {
      // Degenerate anchor (e.g. the information precoder fell orthogonal to
      // the user channel). Re-initialize once, then give up.
      if (restart_used) break;
      restart_used = true;
      res.diagnostics.restarted = true;
      auto d = default_precoder_init(cc, lim, settings.with_jamming);
      if (!d) break;
      res.precoders = *d;
      rate_cur = rates_and_secrecy(cc, res.precoders, lim).gap_bits;
      continue;
    }

    Precoders cand = unstack(rep.solution, m, settings.with_jamming);
    // The linearized constraints are inner approximations anchored at the
    // current point, so every convex combination with the anchor stays truly
    // feasible; halve the step until the true rate stops regressing.
    double tau = 1.0;
    bool accepted = false;
    Precoders trial = cand;
    double rate_trial = rate_cur;
    for (int h = 0; h <= settings.max_step_halvings; ++h) {
      trial.info = res.precoders.info + tau * (cand.info - res.precoders.info);
      trial.jam = res.precoders.jam + tau * (cand.jam - res.precoders.jam);
      rate_trial = rates_and_secrecy(cc, trial, lim).gap_bits;
      if (rate_trial >= rate_cur - settings.monotone_tol) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    // The anchor (and hence the surrogate) only changes on acceptance, so a
    // rejected step would just repeat verbatim: stop here.
    if (!accepted) break;
    double delta = std::abs(rate_trial - rate_cur);
    res.precoders = trial;
    rate_cur = rate_trial;
    res.diagnostics.rate_trace_bits.push_back(std::max(0.0, rate_cur));
    // Declare convergence only when the undamped surrogate optimum itself
    // sits at the anchor; a damped micro-step with a small delta is not a
    // stationary point.
    if (delta < settings.rate_tol_bits && tau == 1.0) break;
  }
  return res;
}

} // namespace xlris
