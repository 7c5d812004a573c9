#pragma once

#include <optional>
#include <vector>

#include "xlris/types.hpp"

namespace xlris {

// Convex quadratically constrained quadratic program over complex vectors:
//
//   minimize    x^H Q x + Re{c^H x} + constant
//   subject to  Re{a_i^H x} >= b_i                    (affine)
//               x^H P_j x <= Re{a_j^H x} + b_j        (quadratic)
//               ||x||^2 <= ball_radius_sq             (optional)
//
// Q and every P_j must be Hermitian positive semidefinite. The solver works
// on the real embedding [Re x; Im x], so no complex arithmetic leaks into the
// Newton systems. No randomness anywhere: identical inputs give bit-identical
// outputs.
struct QcqpProblem {
  int dim = 0;  // complex dimension
  CMat Q;       // dim x dim, Hermitian PSD; empty means zero
  CVec c;       // dim; empty means zero
  double constant = 0.0;

  struct Affine {
    CVec a;
    double b = 0.0;
  };
  struct Quadratic {
    CMat P;  // Hermitian PSD
    CVec a;
    double b = 0.0;
  };
  std::vector<Affine> affine;
  std::vector<Quadratic> quadratic;
  std::optional<double> ball_radius_sq;

  std::size_t constraint_count() const {
    return affine.size() + quadratic.size() + (ball_radius_sq ? 1 : 0);
  }
  // Hermitian symmetry and an eigenvalue floor of -1e-9 * norm on Q and P_j.
  // Throws std::invalid_argument on violation.
  void validate() const;
};

struct SolverSettings {
  double kkt_tol = 1e-7;
  int max_iterations = 100;
  // Strict-feasibility margin (on internally normalized constraints) at which
  // the feasibility phase may exit early.
  double feas_margin = 1e-7;
};

enum class SolverStatus { optimal, max_iterations, infeasible };

const char* to_string(SolverStatus s);

struct SolverReport {
  CVec solution;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::optimal;
  bool ok() const { return status != SolverStatus::infeasible; }
};

// Phase I: find a strictly feasible point, or nullopt if the constraint set
// is (numerically) empty. The warm start is only a search hint.
std::optional<CVec> feasibility_phase(const QcqpProblem& problem,
                                      const SolverSettings& settings = {},
                                      const CVec* warm_start = nullptr);

// Phase II entry point; runs the feasibility phase internally when the warm
// start is absent or infeasible.
SolverReport solve(const QcqpProblem& problem,
                   const SolverSettings& settings = {},
                   const CVec* warm_start = nullptr);

// Objective evaluation in the original complex variables.
double objective_value(const QcqpProblem& problem, const CVec& x);

} // namespace xlris
