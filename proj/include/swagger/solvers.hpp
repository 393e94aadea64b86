#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swagger/penalty.hpp"
#include "swagger/prox.hpp"

namespace swagger {

enum class Mode { constrained, regularized, composite };

/// lambda * phi(Bx)^T S phi(Bx). `strength` is ignored for the constrained term.
struct SwaggerTerm {
  PenaltyConfig penalty;
  double strength = 1.0;
};

/// lambda * ||Bx||_1.
struct L1Term {
  LinearOperator op;
  double strength = 0.0;
};

/// min 1/2 ||Ax - y||^2 + penalty terms, optionally over x >= 0.
///
/// constrained: s.t. R(x) = 0 for swagger[0].
/// regularized: + swagger[0].strength * R(x).
/// composite:   + every swagger and l1 term with its own strength.
struct Problem {
  LinearOperator a;
  Vector y;
  Mode mode = Mode::constrained;
  std::vector<SwaggerTerm> swagger;
  std::vector<L1Term> l1;
  bool nonneg = false;
  double extra_l1 = 0.0;

  static Problem constrained(LinearOperator a, Vector y, PenaltyConfig penalty);
  static Problem regularized(LinearOperator a, Vector y, PenaltyConfig penalty, double lambda);
  static Problem composite(LinearOperator a, Vector y, std::vector<SwaggerTerm> swagger, std::vector<L1Term> l1);

  const PenaltyConfig& penalty() const;
  double lambda() const;
  Index num_vars() const noexcept { return a.cols(); }

  /// Throws shape on inconsistent dimensions.
  void check() const;
};

enum class Init { pseudo_inverse, zeros, given };
enum class Status { converged, max_iters, diverged };

const char* to_string(Status status) noexcept;

/// One iteration of a solver. For multiplier methods `objective_before` and
/// `objective` are both measured at the multiplier in force during the step.
struct TraceRecord {
  int iteration = 0;
  double objective_before = 0.0;
  double objective = 0.0;
  double constraint_residual = 0.0;
  double step = 0.0;
  double multiplier = 0.0;
};

struct SolverOptions {
  std::optional<double> step_x;           ///< fidelity step; default 1 / lambda_max(A^T A)
  std::optional<double> step_multiplier;  ///< multiplier ascent step; default step_x
  double initial_multiplier = 0.0;        ///< lambda^0 in constrained mode
  bool backtracking = true;
  int max_backtracks = 20;
  int max_iters = 5000;
  double tol_rel_change = 1e-8;
  double tol_constraint = 1e-8;
  bool accelerated = false;
  Init init = Init::pseudo_inverse;
  Vector x0;

  // ADMM only.
  double admm_tol = 1e-6;   ///< absolute primal and dual residual tolerance
  bool adapt_rho = true;    ///< residual balancing, factor 2, ratio 10
  int inner_iters = 200;    ///< iterations of the z-step solver
  bool warm_start = true;   ///< start ADMM from the least-squares fit of the data

  std::function<void(const TraceRecord&)> on_iteration;
};

struct SolveResult {
  Vector x_hat;
  int iterations = 0;
  double constraint_residual = 0.0;
  std::vector<double> objective_trace;
  std::vector<TraceRecord> trace;
  Status status = Status::max_iters;
  double multiplier = 0.0;
  double primal_residual = 0.0;  ///< ADMM only
  double dual_residual = 0.0;    ///< ADMM only
};

/// Proximal subgradient method with multiplier ascent (constrained mode) or a
/// fixed strength (regularized mode). Needs B = I and phi = |.|.
SolveResult solve_swagger_constrained(const Problem& problem, const SolverOptions& opts = {});

/// Monotone accelerated variant: keeps the better of an extrapolated and a
/// plain proximal step, so the objective never increases within a step.
SolveResult solve_swagger_accelerated(const Problem& problem, const SolverOptions& opts = {});

/// Momentum recurrence t' = (sqrt(4 t^2 + 1) + 1) / 2.
double next_momentum(double t);

/// ADMM on Bx = z for penalties with B != I, and for composite problems.
SolveResult solve_swagger_admm(const Problem& problem, const SolverOptions& opts = {}, double rho = 1.0);

enum class Baseline { lasso, pshrink, elasso };

const char* to_string(Baseline which) noexcept;

/// Proximal-gradient baselines for the regularized problem with strength
/// problem.lambda(). E-LASSO groups come from the rows of the problem's S.
SolveResult solve_baseline(const Problem& problem, Baseline which, const SolverOptions& opts = {}, double p = 0.5);

/// 1 / lambda_max(A^T A), by power iteration to 1e-6 relative.
double estimate_step(const Matrix& a);
double estimate_step(const LinearOperator& a);

/// Minimum-norm least-squares solution, singular values below 1e-10 sigma_max dropped.
Vector init_pseudo_inverse(const Matrix& a, const Vector& y);
Vector init_pseudo_inverse(const LinearOperator& a, const Vector& y);

/// E-LASSO groups {j : S_ij + delta_ij = 1}, one per row, duplicates removed.
Groups elasso_groups(const StructureMatrix& s);

/// argmin_z 1/2 ||z - v||^2 + weight * |z|^T S |z| (or s.t. |z|^T S |z| = 0 when
/// `constrained`), started from v or from `start`. This is the ADMM z-step.
Vector swagger_denoise(const StructureMatrix& s, const Vector& v, double weight, bool constrained,
                       const SolverOptions& opts);
Vector swagger_denoise(const StructureMatrix& s, const Vector& v, double weight, bool constrained,
                       const SolverOptions& opts, const Vector& start);

}  // namespace swagger
