#pragma once

#include <string_view>
#include <vector>

#include "bimodal/qp_problem.hpp"

namespace bimodal {

struct QpSolverConfig {
  double kkt_tolerance = 1e-6;
  int max_iterations = 200;
  double step_fraction = 0.99;          // fraction-to-boundary
  double regularization = 1e-10;        // added to the KKT system only
  bool check_feasibility = true;        // run the phase-1 problem first
};

enum class SolveStatus { kOptimal, kMaxIterations, kInfeasible };

std::string_view ToString(SolveStatus status);

/// Max-norm optimality residuals for
///   min f'Qf + a'f  s.t.  Gf <= h, Af = b
/// with multipliers lambda >= 0 (inequalities) and nu (equalities).
struct KktResiduals {
  double stationarity = 0.0;     // |2Qf + a + G'lambda + A'nu|
  double primal = 0.0;           // max(Gf - h, 0) and |Af - b|
  double complementarity = 0.0;  // max_i |lambda_i (Gf - h)_i|
  double dual = 0.0;             // max(-min_i lambda_i, 0)

  double max() const;
  bool within(double tolerance) const { return max() <= tolerance; }
};

struct Solution {
  Vector f;
  Vector inequality_duals;
  Vector equality_duals;
  double objective = 0.0;  // Evaluate(problem, f), constant included
  SolveStatus status = SolveStatus::kMaxIterations;
  KktResiduals kkt;
  int iterations = 0;
  /// Merit value (residual norms plus duality gap) after each accepted step.
  std::vector<double> merit_history;
};

KktResiduals CheckKkt(const QpProblem& problem, const Vector& f, const Vector& inequality_duals,
                      const Vector& equality_duals);

/// Primal-dual interior point method with Mehrotra predictor-corrector steps
/// on an infeasible start. A phase-1 problem certifies feasibility first
/// unless disabled in `config`.
Solution Solve(const QpProblem& problem, const QpSolverConfig& config = {});

struct OracleResult {
  Vector f;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kInfeasible;
  /// Lipschitz constant of the objective on the search box times the grid
  /// cell diameter.
  double gap_bound = 0.0;
  Vector lower;
  Vector upper;
};

/// Exhaustive search over a regular grid with `resolution` points per axis.
/// Variable bounds come from propagating the inequality rows. Refuses (domain
/// error) problems with more than 4 variables, equality rows or unbounded
/// variables.
OracleResult GridOracle(const QpProblem& problem, int resolution);

}  // namespace bimodal
