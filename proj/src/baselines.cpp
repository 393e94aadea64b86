#include <cmath>

#include "swagger/error.hpp"
#include "swagger/solvers.hpp"

namespace swagger {

namespace {

// Weighted soft threshold after a step on the sum of squared group l1 norms,
// with the weights 2 * sum_{g containing i} ||x_g||_1 frozen at x. Entries
// that would cross zero stop at zero.
Vector elasso_subgradient_shrink(const Vector& w, const Vector& x, const Groups& groups, double scale) {
  Vector weight = Vector::Zero(x.size());
  for (const auto& g : groups) {
    double norm = 0.0;
    for (Index i : g) norm += std::abs(x(i));
    for (Index i : g) weight(i) += 2.0 * norm;
  }
  Vector out(w.size());
  for (Index i = 0; i < w.size(); ++i) out(i) = std::max(std::abs(w(i)) - scale * weight(i), 0.0) * sign(w(i));
  return out;
}

double elasso_value(const Vector& x, const Groups& groups) {
  double v = 0.0;
  for (const auto& g : groups) {
    double norm = 0.0;
    for (Index i : g) norm += std::abs(x(i));
    v += norm * norm;
  }
  return v;
}

}  // namespace

SolveResult solve_baseline(const Problem& problem, Baseline which, const SolverOptions& opts, double p) {
  problem.check();
  if (problem.mode != Mode::regularized) throw Error(Errc::shape, "baselines solve the regularized problem");
  const double lambda = problem.lambda();
  const double alpha = opts.step_x ? *opts.step_x : estimate_step(problem.a);
  if (which == Baseline::pshrink && !(p > 0.0 && p <= 1.0)) throw Error(Errc::range, "p must lie in (0, 1]");

  Groups groups;
  bool separable = true;
  if (which == Baseline::elasso) {
    groups = elasso_groups(problem.penalty().structure());
    separable = groups_disjoint(groups);
  }

  auto penalty_value = [&](const Vector& x) {
    switch (which) {
      case Baseline::lasso: return x.lpNorm<1>();
      // Proxy for the p-shrinkage penalty, which has no closed form.
      case Baseline::pshrink: return x.cwiseAbs().array().pow(p).sum();
      case Baseline::elasso: return elasso_value(x, groups);
    }
    return 0.0;
  };
  auto objective = [&](const Vector& x) {
    return 0.5 * (problem.a.apply(x) - problem.y).squaredNorm() + lambda * penalty_value(x);
  };
  auto prox = [&](const Vector& w, const Vector& at) -> Vector {
    Vector q;
    switch (which) {
      case Baseline::lasso: q = soft_threshold(w, alpha * lambda); break;
      case Baseline::pshrink: q = p_shrink(w, alpha * lambda, p); break;
      case Baseline::elasso:
        q = separable ? prox_elasso(w, groups, 2.0 * alpha * lambda)
                      : elasso_subgradient_shrink(w, at, groups, alpha * lambda);
        break;
    }
    if (problem.nonneg) q = q.cwiseMax(0.0);
    return q;
  };
  auto grad_f = [&](const Vector& x) { return problem.a.apply_transpose(problem.a.apply(x) - problem.y); };

  Vector x;
  switch (opts.init) {
    case Init::zeros: x = Vector::Zero(problem.num_vars()); break;
    case Init::given: x = opts.x0; break;
    case Init::pseudo_inverse: x = init_pseudo_inverse(problem.a, problem.y); break;
  }
  if (x.size() != problem.num_vars()) throw Error(Errc::shape, "initial point has wrong length");

  // FISTA only where the prox is exact.
  const bool fista = opts.accelerated && (which != Baseline::elasso || separable);
  Vector y = x;
  double t = 1.0;
  SolveResult res;
  double prev = objective(x);
  for (int k = 1; k <= opts.max_iters; ++k) {
    const Vector& base = fista ? y : x;
    Vector next = prox(base - alpha * grad_f(base), base);
    const double obj = objective(next);
    res.iterations = k;
    TraceRecord rec{k, prev, obj, 0.0, alpha, lambda};
    res.trace.push_back(rec);
    res.objective_trace.push_back(obj);
    if (opts.on_iteration) opts.on_iteration(rec);
    prev = obj;
    if (!std::isfinite(obj) || !next.allFinite()) {
      res.status = Status::diverged;
      x = std::move(next);
      break;
    }
    const double change = (next - x).norm();
    if (fista) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = next + ((t - 1.0) / t_next) * (next - x);
      t = t_next;
    }
    x = std::move(next);
    if (change == 0.0 || change <= opts.tol_rel_change * x.norm()) {
      res.status = Status::converged;
      break;
    }
  }
  res.x_hat = std::move(x);
  res.multiplier = lambda;
  return res;
}

}  // namespace swagger
