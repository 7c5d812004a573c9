#include "xlris/ris.hpp"

#include <chrono>
#include <stdexcept>

namespace xlris {

void PhaseAlphabet::validate() const {
  if (bits < 1 || bits > 16)
    throw std::invalid_argument("phase alphabet bits must be in [1, 16]");
}

std::vector<double> PhaseAlphabet::levels() const {
  validate();
  std::vector<double> out(size());
  for (int k = 0; k < size(); ++k) out[k] = -kPi + k * step();
  return out;
}

double PhaseAlphabet::round_phase(double phase) const {
  validate();
  const int k_count = size();
  double u = (phase + kPi) / step();  // grid coordinate, level k at u = k
  double shifted = u + 0.5;
  double fl = std::floor(shifted);
  long k = static_cast<long>(fl);
  if (shifted == fl) --k;  // exact midpoint: take the smaller phase
  k %= k_count;
  if (k < 0) k += k_count;  // also folds +pi onto -pi
  return -kPi + k * step();
}

CascadeCoefficients cascade_coefficients(const ChannelSet& ch,
                                         const Precoders& p) {
  if (p.info.size() != ch.bs_ris.cols())
    throw std::invalid_argument("precoder length != BS antenna count");
  CVec gi = ch.bs_ris * p.info;
  CVec gj = p.jam.size() ? CVec(ch.bs_ris * p.jam)
                         : CVec(CVec::Zero(ch.bs_ris.rows()));
  CascadeCoefficients cc;
  cc.user_info = ch.user.conjugate().cwiseProduct(gi);
  cc.user_jam = ch.user.conjugate().cwiseProduct(gj);
  cc.eve_info = ch.eve.conjugate().cwiseProduct(gi);
  cc.eve_jam = ch.eve.conjugate().cwiseProduct(gj);
  return cc;
}

ThetaUpdateResult theta_update(const CascadeCoefficients& coeffs,
                               const NoiseAndLimits& lim, const WmmseAux& aux,
                               const CVec& penalty_target, double penalty,
                               const CVec& anchor, const CVec& warm_start,
                               const SolverSettings& qcqp) {
  const cplx j(0.0, 1.0);
  const int n = static_cast<int>(coeffs.user_info.size());
  if (penalty <= 0) throw std::invalid_argument("penalty must be positive");

  // Rank-one pieces: |theta^T a|^2 = theta^H (conj(a) a^T) theta.
  auto outer = [](const CVec& a) -> CMat {
    return a.conjugate() * a.transpose();
  };

  QcqpProblem prob;
  prob.dim = n;
  double cu = aux.weight_user * std::norm(aux.eq_user);
  double ce = aux.weight_eve * std::norm(aux.eq_eve);
  prob.Q = cu * outer(coeffs.user_info) +
           ce * (outer(coeffs.eve_info) + outer(coeffs.eve_jam)) +
           penalty * CMat::Identity(n, n);
  prob.c = -2.0 * aux.weight_user * aux.eq_user * coeffs.user_info.conjugate() +
           2.0 * j * aux.weight_eve * aux.eq_eve * coeffs.eve_info.conjugate() -
           2.0 * penalty * penalty_target;
  prob.constant = penalty * penalty_target.squaredNorm();

  // Linearized QoS floor at the anchor.
  cplx tap_u = anchor.transpose() * coeffs.user_info;
  QcqpProblem::Affine af;
  af.a = 2.0 * tap_u * coeffs.user_info.conjugate();
  af.b = lim.qos_sinr_min * lim.noise_user + std::norm(tap_u);
  prob.affine.push_back(std::move(af));

  // Linearized cancellation ordering (jamming on top at the user).
  if (coeffs.user_jam.size() && coeffs.user_jam.squaredNorm() > 0) {
    cplx tap_j = anchor.transpose() * coeffs.user_jam;
    QcqpProblem::Quadratic qd;
    qd.P = outer(coeffs.user_info);
    qd.a = 2.0 * tap_j * coeffs.user_jam.conjugate();
    qd.b = -std::norm(tap_j);
    prob.quadratic.push_back(std::move(qd));
  }

  // Fast path: the subproblem is interior at most iterations (the QoS floor
  // is slack by orders of magnitude and the cancellation margin usually has
  // room), and the objective is strictly convex thanks to the penalty ridge.
  // The unconstrained minimizer certifies itself as the global optimum
  // whenever it satisfies every constraint, skipping the interior-point
  // machinery entirely.
  Eigen::LLT<CMat> llt(prob.Q);
  if (llt.info() == Eigen::Success) {
    CVec x = llt.solve(CVec(-0.5 * prob.c));
    bool interior = true;
    for (const auto& a : prob.affine) {
      double lhs = a.a.dot(x).real();
      if (lhs < a.b + 1e-12 * (1.0 + std::abs(a.b) + std::abs(lhs)))
        interior = false;
    }
    for (const auto& q : prob.quadratic) {
      double lhs = x.dot(q.P * x).real();
      double rhs = q.a.dot(x).real() + q.b;
      if (lhs > rhs - 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs)))
        interior = false;
    }
    if (interior) {
      ThetaUpdateResult out;
      out.theta = std::move(x);
      out.status = SolverStatus::optimal;
      out.solver_iterations = 0;
      return out;
    }
  }

  SolverReport rep = solve(prob, qcqp, &warm_start);
  ThetaUpdateResult out;
  out.theta = rep.ok() ? rep.solution : warm_start;
  out.status = rep.status;
  out.solver_iterations = rep.iterations;
  return out;
}

namespace {

cplx unit_project(cplx x) {
  double m = std::abs(x);
  if (m == 0.0) return cplx(1.0, 0.0);
  if (m == 1.0) return x;  // already on the circle
  return x / m;
}

} // namespace

CVec project_unit_modulus(const CVec& relaxed, const CVec& dual) {
  CVec out(relaxed.size());
  for (int i = 0; i < relaxed.size(); ++i)
    out(i) = unit_project(relaxed(i) - dual(i));
  return out;
}

CVec project_unit_modulus(const AdmmState& s) {
  return project_unit_modulus(s.relaxed, s.dual);
}

CVec discrete_line_search(const CVec& relaxed, const CVec& dual,
                          const PhaseAlphabet& alphabet) {
  alphabet.validate();
  CVec out(relaxed.size());
  for (int i = 0; i < relaxed.size(); ++i) {
    cplx x = relaxed(i) - dual(i);
    out(i) = std::polar(1.0, alphabet.round_phase(std::arg(x)));
  }
  return out;
}

CVec discrete_line_search(const AdmmState& s, const PhaseAlphabet& alphabet) {
  return discrete_line_search(s.relaxed, s.dual, alphabet);
}

CVec dual_update(const CVec& dual, const CVec& relaxed,
                 const CVec& projected) {
  return dual - relaxed + projected;
}

P3Result solve_p3(const ChannelSet& ch, const Precoders& p,
                  const NoiseAndLimits& lim, const RisVector& init,
                  const RisMode& mode, const RisSettings& settings) {
  const int n = static_cast<int>(ch.bs_ris.rows());
  if (init.v.size() != n)
    throw std::invalid_argument("init length != element count");
  PhaseAlphabet alphabet{mode.bits};
  if (mode.discrete) alphabet.validate();

  CascadeCoefficients coeffs = cascade_coefficients(ch, p);
  auto rate_of = [&](const CVec& theta) {
    return rates_and_secrecy(cascade(ch, RisVector{theta}), p, lim).gap_bits;
  };

  AdmmState st;
  st.relaxed = init.v;
  st.projected = init.v;
  st.dual = CVec::Zero(n);
  st.penalty = settings.penalty_init;
  const double penalty_floor = settings.penalty_init * 1e-6;
  const double penalty_cap = settings.penalty_init * 1e9;
  const bool jamming_active = p.jam.size() > 0 && p.jam.norm() > 0;

  P3Result res;
  double rate_prev = rate_of(st.projected);
  const double init_rate = rate_prev;
  CVec best_theta = st.projected;
  double best_rate = rate_prev;
  res.diagnostics.rate_trace_bits.push_back(std::max(0.0, rate_prev));
  res.diagnostics.accepted_rate_trace_bits.push_back(std::max(0.0, rate_prev));

  // Accepted track: only iterates that improve the true rate and respect
  // the true (non-linearized) constraints become result candidates.
  auto consider = [&](const CVec& theta, double rate_now) {
    if (rate_now <= best_rate) return;
    CascadedChannels cc_now = cascade(ch, RisVector{theta});
    ConstraintReport feas = check_constraints(cc_now, p, RisVector{theta}, lim,
                                              settings.constraint_tol,
                                              jamming_active);
    if (feas.all_ok()) {
      best_rate = rate_now;
      best_theta = theta;
      res.diagnostics.accepted_rate_trace_bits.push_back(
          std::max(0.0, best_rate));
    }
  };

  auto run_stage = [&](bool alphabet_proj, int max_iters) {
    for (int it = 0; it < max_iters; ++it) {
    st.iteration = ++res.diagnostics.iterations;

    CascadedChannels cc_anchor = cascade(ch, RisVector{st.projected});
    WmmseAux aux = update_aux(cc_anchor, p, lim, settings.eve_aux,
                              settings.weight_floor, settings.weight_cap);

    auto t0 = std::chrono::steady_clock::now();
    ThetaUpdateResult upd =
        theta_update(coeffs, lim, aux, st.projected + st.dual, st.penalty,
                     st.projected, st.relaxed, settings.qcqp);
    if (upd.status == SolverStatus::infeasible) {
      // Degenerate anchor: retry once from the relaxed iterate with a
      // stiffer penalty before giving up on this pass.
      ++res.diagnostics.theta_solver_failures;
      st.penalty = std::min(st.penalty * 2.0, penalty_cap);
      CascadedChannels cc_rel = cascade(ch, RisVector{st.relaxed});
      WmmseAux aux_rel = update_aux(cc_rel, p, lim, settings.eve_aux,
                                    settings.weight_floor, settings.weight_cap);
      upd = theta_update(coeffs, lim, aux_rel, st.projected + st.dual,
                         st.penalty, st.relaxed, st.relaxed, settings.qcqp);
      if (upd.status == SolverStatus::infeasible) break;
    }
    res.diagnostics.theta_update_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count());

    // The remaining two splitting steps run exactly as printed: transient
    // dips in the true rate are part of the dynamics and are tolerated here.
    // The monotone guard lives in the accepted track below, not in the
    // recursion itself — damping the recursion to force per-iteration
    // monotonicity deadlocks it, because the surrogate weights the
    // eavesdropper term far more heavily than the true rate does near the
    // SINR_e = 1 barrier.
    CVec prev_proj = st.projected;
    st.relaxed = upd.theta;
    st.projected = alphabet_proj
                       ? discrete_line_search(st.relaxed, st.dual, alphabet)
                       : project_unit_modulus(st.relaxed, st.dual);
    st.dual = dual_update(st.dual, st.relaxed, st.projected);

    double rate_now = rate_of(st.projected);
    double rate_delta = std::abs(rate_now - rate_prev);
    rate_prev = rate_now;
    res.diagnostics.rate_trace_bits.push_back(std::max(0.0, rate_now));

    consider(st.projected, rate_now);

    double primal = (st.relaxed - st.projected).cwiseAbs().maxCoeff();
    double dual_res = st.penalty * (st.projected - prev_proj).norm();
    res.diagnostics.primal_residual = primal;

    // Residual balancing, capped; the scaled dual is deliberately left
    // untouched by penalty changes. A zero dual residual carries no scale
    // information — in discrete mode the projected iterate is constant
    // between quantization jumps, and the relaxed/dual pair then converges
    // to consensus onto the pinned codeword (the dual exactly absorbs the
    // objective gradient). Doubling the penalty there would freeze the
    // relaxed iterate for good; instead the penalty decays so the relaxed
    // copy can reach a quantization boundary and flip a level. Once the
    // projected copy moves again, ordinary balancing resumes.
    if (dual_res > 0) {
      if (primal > settings.residual_balance * dual_res)
        st.penalty = std::min(st.penalty * 2.0, penalty_cap);
      else if (dual_res > settings.residual_balance * primal)
        st.penalty = std::max(st.penalty * 0.5, penalty_floor);
    } else {
      st.penalty = std::max(st.penalty * 0.5, penalty_floor);
    }

    if (primal < settings.admm_tol && rate_delta < settings.rate_tol_bits)
      break;
    }
  };

  run_stage(mode.discrete, settings.max_iterations);

  res.diagnostics.final_penalty = st.penalty;
  res.diagnostics.improved = best_rate > init_rate + settings.monotone_tol;
  res.ris = RisVector{best_rate >= init_rate ? best_theta : init.v};
  return res;
}

} // namespace xlris
