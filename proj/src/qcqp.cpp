#include "xlris/qcqp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <functional>
#include <stdexcept>

// Primal-dual interior-point method on the real embedding [Re x; Im x].
// Constraints are normalized to O(1) coefficient scale before iterating so
// the pinned KKT tolerance is dimensionless; the physical quantities here
// span ~10 orders of magnitude (watts vs. squared channel gains).

namespace xlris {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::max_iterations: return "max_iterations";
    case SolverStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

constexpr double kScaleFloor = 1e-30;

RMat embed_hermitian(const CMat& Q) {
  const int n = static_cast<int>(Q.rows());
  RMat S(2 * n, 2 * n);
  S.topLeftCorner(n, n) = Q.real();
  S.topRightCorner(n, n) = -Q.imag();
  S.bottomLeftCorner(n, n) = Q.imag();
  S.bottomRightCorner(n, n) = Q.real();
  // Guard against asymmetry from accumulated rounding in the caller.
  return 0.5 * (S + S.transpose());
}

RVec embed_vector(const CVec& a) {
  const int n = static_cast<int>(a.size());
  RVec d(2 * n);
  d.head(n) = a.real();
  d.tail(n) = a.imag();
  return d;
}

CVec lift(const RVec& z) {
  const int n = static_cast<int>(z.size()) / 2;
  CVec x(n);
  for (int i = 0; i < n; ++i) x(i) = cplx(z(i), z(n + i));
  return x;
}

// One scalar inequality q(z) = z^T B z + d^T z + e <= 0 (B optional).
struct RealCon {
  bool has_B = false;
  RMat B;
  RVec d;
  double e = 0;
};

double con_value(const RealCon& c, const RVec& z, RVec* grad) {
  if (c.has_B) {
    RVec bz = c.B * z;
    if (grad) *grad = 2.0 * bz + c.d;
    return z.dot(bz) + c.d.dot(z) + c.e;
  }
  if (grad) *grad = c.d;
  return c.d.dot(z) + c.e;
}

struct RealProb {
  int n = 0;
  RMat A;  // objective z^T A z + g^T z (normalized)
  RVec g;
  std::vector<RealCon> cons;
  bool impossible = false;  // a constraint that no point can satisfy
};

RealProb build_real(const QcqpProblem& p) {
  RealProb P;
  P.n = 2 * p.dim;
  const double rho = p.ball_radius_sq ? std::sqrt(*p.ball_radius_sq) : 1.0;

  P.A = p.Q.size() ? embed_hermitian(p.Q) : RMat::Zero(P.n, P.n);
  P.g = p.c.size() ? embed_vector(p.c) : RVec::Zero(P.n);
  double sobj = std::max({P.A.norm() * rho * rho, P.g.norm() * rho, 1e-12});
  P.A /= sobj;
  P.g /= sobj;

  for (const auto& af : p.affine) {
    RVec d = embed_vector(af.a);
    double dn = d.norm();
    if (dn == 0.0) {
      // 0 >= b: either vacuous or unsatisfiable.
      if (af.b > 0) P.impossible = true;
      continue;
    }
    double s = std::max({std::abs(af.b), dn * rho, kScaleFloor});
    P.cons.push_back({false, {}, -d / s, af.b / s});
  }
  for (const auto& qd : p.quadratic) {
    RMat B = embed_hermitian(qd.P);
    RVec d = qd.a.size() ? embed_vector(qd.a) : RVec::Zero(P.n);
    double s = std::max(
        {B.norm() * rho * rho, d.norm() * rho, std::abs(qd.b), kScaleFloor});
    P.cons.push_back({true, B / s, -d / s, -qd.b / s});
  }
  if (p.ball_radius_sq) {
    double r = *p.ball_radius_sq;
    P.cons.push_back(
        {true, RMat::Identity(P.n, P.n) / r, RVec::Zero(P.n), -1.0});
  }
  return P;
}

struct IpmOutcome {
  RVec z;
  double kkt = 0;
  int iters = 0;
  bool converged = false;
};

// Core loop; requires a strictly feasible start. early_exit (optional) is
// polled once per iteration and aborts with converged = true when it fires.
IpmOutcome run_ipm(const RealProb& P, RVec z, const SolverSettings& st,
                   const std::function<bool(const RVec&)>& early_exit) {
  const int n = P.n;
  const int m = static_cast<int>(P.cons.size());
  const double mu = 10.0, alpha = 0.01, beta = 0.5;
  IpmOutcome out;

  if (m == 0) {
    // Pure quadratic minimization.
    double ridge = 1e-12 * (P.A.trace() / n + 1.0);
    Eigen::LDLT<RMat> ldlt(2.0 * P.A + ridge * RMat::Identity(n, n));
    out.z = ldlt.solve(-P.g);
    out.kkt = (2.0 * P.A * out.z + P.g).lpNorm<Eigen::Infinity>();
    out.converged = true;
    return out;
  }

  RVec q(m), lam(m);
  RMat J(m, n);
  RVec grad(n);
  auto refresh = [&](const RVec& at) {
    for (int i = 0; i < m; ++i) {
      q(i) = con_value(P.cons[i], at, &grad);
      J.row(i) = grad;
    }
  };
  refresh(z);
  if ((q.array() >= 0.0).any())
    throw std::logic_error("interior-point start is not strictly feasible");
  lam = (-q.array()).inverse().min(1e8).matrix();

  int stalls = 0;
  for (int it = 0; it < st.max_iterations; ++it) {
    out.iters = it + 1;
    if (early_exit && early_exit(z)) {
      out.z = z;
      out.converged = true;
      return out;
    }

    RVec r_dual = 2.0 * P.A * z + P.g + J.transpose() * lam;
    double eta = -q.dot(lam);
    double t = mu * m / std::max(eta, 1e-300);
    RVec r_cent = (-(lam.array() * q.array()) - 1.0 / t).matrix();

    out.kkt = std::max(r_dual.lpNorm<Eigen::Infinity>(), eta);
    if (r_dual.lpNorm<Eigen::Infinity>() <= st.kkt_tol && eta <= st.kkt_tol) {
      out.z = z;
      out.converged = true;
      return out;
    }

    // Reduced Newton system: eliminate dlam analytically.
    RMat M = 2.0 * P.A;
    for (int i = 0; i < m; ++i)
      if (P.cons[i].has_B) M.noalias() += (2.0 * lam(i)) * P.cons[i].B;
    RVec w = (lam.array() / (-q.array())).matrix();
    M.noalias() += J.transpose() * w.asDiagonal() * J;
    RVec rhs = -r_dual - J.transpose() * (r_cent.array() / q.array()).matrix();

    RVec dz;
    double ridge = 1e-12 * (std::abs(M.trace()) / n + 1.0);
    bool solved = false;
    for (int attempt = 0; attempt < 3 && !solved; ++attempt) {
      Eigen::LLT<RMat> llt(M + ridge * RMat::Identity(n, n));
      if (llt.info() == Eigen::Success) {
        dz = llt.solve(rhs);
        solved = true;
      }
      ridge *= 1e4;
    }
    if (!solved) {
      Eigen::LDLT<RMat> ldlt(M + ridge * RMat::Identity(n, n));
      dz = ldlt.solve(rhs);
    }
    RVec jdz = J * dz;
    RVec dlam = ((r_cent.array() - lam.array() * jdz.array()) / q.array())
                    .matrix();

    // Largest dual-feasible step, then backtrack into the interior and onto
    // sufficient residual decrease.
    double smax = 1.0;
    for (int i = 0; i < m; ++i)
      if (dlam(i) < 0) smax = std::min(smax, -lam(i) / dlam(i));
    double s = 0.99 * smax;
    int bt = 0;
    auto strictly_feasible = [&](const RVec& at) {
      for (const auto& c : P.cons)
        if (con_value(c, at, nullptr) >= 0) return false;
      return true;
    };
    while (bt < 60 && !strictly_feasible(z + s * dz)) {
      s *= beta;
      ++bt;
    }
    double rnorm = std::sqrt(r_dual.squaredNorm() + r_cent.squaredNorm());
    RVec zt(n), qt(m), lamt(m);
    RMat Jt(m, n);
    while (bt < 60) {
      zt = z + s * dz;
      lamt = lam + s * dlam;
      for (int i = 0; i < m; ++i) {
        qt(i) = con_value(P.cons[i], zt, &grad);
        Jt.row(i) = grad;
      }
      RVec rd = 2.0 * P.A * zt + P.g + Jt.transpose() * lamt;
      RVec rc = (-(lamt.array() * qt.array()) - 1.0 / t).matrix();
      double rn = std::sqrt(rd.squaredNorm() + rc.squaredNorm());
      if (rn <= (1.0 - alpha * s) * rnorm) break;
      s *= beta;
      ++bt;
    }
    z += s * dz;
    lam += s * dlam;
    refresh(z);
    if (s < 1e-13) {
      if (++stalls >= 2) break;
    } else {
      stalls = 0;
    }
  }
  out.z = z;
  return out;
}

// Phase I: minimize the worst slack s over (z, s) with q_i(z) <= s, stopping
// as soon as s is comfortably negative.
std::optional<RVec> phase_one(const RealProb& P, const RVec& z0,
                              const SolverSettings& st) {
  if (P.impossible) return std::nullopt;
  const int n = P.n;
  const int m = static_cast<int>(P.cons.size());
  if (m == 0) return z0;

  auto worst = [&](const RVec& z) {
    double mq = -std::numeric_limits<double>::infinity();
    for (const auto& c : P.cons) mq = std::max(mq, con_value(c, z, nullptr));
    return mq;
  };
  double maxq0 = worst(z0);
  if (maxq0 <= -st.feas_margin) return z0;

  RealProb aug;
  aug.n = n + 1;
  aug.A = RMat::Zero(n + 1, n + 1);
  aug.g = RVec::Zero(n + 1);
  aug.g(n) = 1.0;
  for (const auto& c : P.cons) {
    RealCon cc;
    cc.has_B = c.has_B;
    if (c.has_B) {
      cc.B = RMat::Zero(n + 1, n + 1);
      cc.B.topLeftCorner(n, n) = c.B;
    }
    cc.d = RVec::Zero(n + 1);
    cc.d.head(n) = c.d;
    cc.d(n) = -1.0;
    cc.e = c.e;
    aug.cons.push_back(std::move(cc));
  }
  double s0 = maxq0 + std::max(1.0, 0.1 * std::abs(maxq0));
  double cap = 10.0 * (std::abs(s0) + 1.0);
  RealCon bound;  // keeps the linear objective bounded below
  bound.d = RVec::Zero(n + 1);
  bound.d(n) = -1.0;
  bound.e = -cap;
  aug.cons.push_back(std::move(bound));

  RVec za(n + 1);
  za.head(n) = z0;
  za(n) = s0;

  double best_maxq = maxq0;
  RVec best_z = z0;
  auto early = [&](const RVec& cur) {
    double mq = worst(cur.head(n));
    if (mq < best_maxq) {
      best_maxq = mq;
      best_z = cur.head(n);
    }
    return mq <= -st.feas_margin;
  };
  SolverSettings st1 = st;
  st1.max_iterations = std::max(st.max_iterations, 200);
  run_ipm(aug, za, st1, early);

  if (best_maxq < 0) return best_z;  // strictly feasible, possibly thin
  return std::nullopt;
}

} // namespace

void QcqpProblem::validate() const {
  if (dim <= 0) throw std::invalid_argument("qcqp: dim must be positive");
  auto check_psd = [&](const CMat& H, const char* label) {
    if (H.rows() != dim || H.cols() != dim)
      throw std::invalid_argument(std::string("qcqp: bad dimensions for ") +
                                  label);
    double scale = H.cwiseAbs().maxCoeff();
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + scale))
      throw std::invalid_argument(std::string("qcqp: ") + label +
                                  " is not Hermitian");
    double shift = 1e-9 * H.norm() + 1e-300;
    Eigen::LLT<CMat> llt(H + shift * CMat::Identity(dim, dim));
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<CMat> eig(H);
      if (eig.eigenvalues().minCoeff() < -1e-9 * (1.0 + H.norm()))
        throw std::invalid_argument(std::string("qcqp: ") + label +
                                    " is not positive semidefinite");
    }
  };
  if (Q.size()) check_psd(Q, "Q");
  if (c.size() && c.size() != dim)
    throw std::invalid_argument("qcqp: bad length for c");
  for (const auto& af : affine)
    if (af.a.size() != dim)
      throw std::invalid_argument("qcqp: bad length for affine constraint");
  for (const auto& qd : quadratic) {
    check_psd(qd.P, "P");
    if (qd.a.size() && qd.a.size() != dim)
      throw std::invalid_argument("qcqp: bad length for quadratic constraint");
  }
  if (ball_radius_sq && *ball_radius_sq <= 0)
    throw std::invalid_argument("qcqp: ball radius must be positive");
}

double objective_value(const QcqpProblem& p, const CVec& x) {
  double v = p.constant;
  if (p.Q.size()) v += x.dot(p.Q * x).real();
  if (p.c.size()) v += p.c.dot(x).real();
  return v;
}

std::optional<CVec> feasibility_phase(const QcqpProblem& problem,
                                      const SolverSettings& settings,
                                      const CVec* warm_start) {
  problem.validate();
  RealProb P = build_real(problem);
  RVec z0 = (warm_start && warm_start->size() == problem.dim)
                ? embed_vector(*warm_start)
                : RVec::Zero(P.n);
  auto z = phase_one(P, z0, settings);
  if (!z) return std::nullopt;
  return lift(*z);
}

SolverReport solve(const QcqpProblem& problem, const SolverSettings& settings,
                   const CVec* warm_start) {
  problem.validate();
  RealProb P = build_real(problem);
  RVec z0 = (warm_start && warm_start->size() == problem.dim)
                ? embed_vector(*warm_start)
                : RVec::Zero(P.n);

  SolverReport rep;
  auto feas = phase_one(P, z0, settings);
  if (!feas) {
    rep.status = SolverStatus::infeasible;
    rep.solution = CVec::Zero(problem.dim);
    return rep;
  }
  IpmOutcome out = run_ipm(P, *feas, settings, nullptr);
  rep.solution = lift(out.z);
  rep.objective = objective_value(problem, rep.solution);
  rep.kkt_residual = out.kkt;
  rep.iterations = out.iters;
  rep.status =
      out.converged ? SolverStatus::optimal : SolverStatus::max_iterations;
  return rep;
}

} // namespace xlris
