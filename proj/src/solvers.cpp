#include "swagger/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "swagger/error.hpp"

namespace swagger {

const char* to_string(Status status) noexcept {
  switch (status) {
    case Status::converged: return "converged";
    case Status::max_iters: return "max-iters";
    case Status::diverged: return "diverged";
  }
  return "unknown";
}

const char* to_string(Baseline which) noexcept {
  switch (which) {
    case Baseline::lasso: return "lasso";
    case Baseline::pshrink: return "pshrink";
    case Baseline::elasso: return "elasso";
  }
  return "unknown";
}

Problem Problem::constrained(LinearOperator a, Vector y, PenaltyConfig penalty) {
  Problem p;
  p.a = std::move(a);
  p.y = std::move(y);
  p.mode = Mode::constrained;
  p.swagger.push_back({std::move(penalty), 0.0});
  return p;
}

Problem Problem::regularized(LinearOperator a, Vector y, PenaltyConfig penalty, double lambda) {
  Problem p;
  p.a = std::move(a);
  p.y = std::move(y);
  p.mode = Mode::regularized;
  p.swagger.push_back({std::move(penalty), lambda});
  return p;
}

Problem Problem::composite(LinearOperator a, Vector y, std::vector<SwaggerTerm> swagger, std::vector<L1Term> l1) {
  Problem p;
  p.a = std::move(a);
  p.y = std::move(y);
  p.mode = Mode::composite;
  p.swagger = std::move(swagger);
  p.l1 = std::move(l1);
  return p;
}

const PenaltyConfig& Problem::penalty() const {
  if (swagger.empty()) throw Error(Errc::shape, "problem has no SWAGGER term");
  return swagger.front().penalty;
}

double Problem::lambda() const { return swagger.empty() ? 0.0 : swagger.front().strength; }

void Problem::check() const {
  if (y.size() != a.rows()) {
    throw Error(Errc::shape, "y has length " + std::to_string(y.size()) + " but A is " + a.name());
  }
  if (mode != Mode::composite && swagger.empty()) throw Error(Errc::shape, "problem has no SWAGGER term");
  for (const auto& t : swagger) {
    if (t.penalty.input_dim() != a.cols()) {
      throw Error(Errc::shape, "penalty operator " + t.penalty.op().name() + " does not act on " +
                                   std::to_string(a.cols()) + " variables");
    }
    if (mode != Mode::constrained && !(t.strength >= 0.0)) throw Error(Errc::range, "negative strength");
  }
  for (const auto& t : l1) {
    if (t.op.cols() != a.cols()) throw Error(Errc::shape, "l1 operator " + t.op.name() + " has wrong width");
    if (!(t.strength >= 0.0)) throw Error(Errc::range, "negative l1 strength");
  }
  if (!(extra_l1 >= 0.0)) throw Error(Errc::range, "negative extra_l1");
}

double estimate_step(const LinearOperator& a) {
  const Index n = a.cols();
  if (n == 0) throw Error(Errc::degenerate, "empty operator");
  if (a.is_identity()) return 1.0;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Vector w = a.apply_transpose(a.apply(v));
    const double norm = w.norm();
    if (norm == 0.0) {
      if (it == 0 && a.to_dense().norm() == 0.0) throw Error(Errc::degenerate, "zero matrix has no step size");
      break;
    }
    const double next = v.dot(w);
    v = w / norm;
    if (it > 0 && std::abs(next - est) <= 1e-7 * std::abs(next)) {
      est = next;
      break;
    }
    est = next;
  }
  if (!(est > 0.0)) throw Error(Errc::degenerate, "zero matrix has no step size");
  return 1.0 / est;
}

double estimate_step(const Matrix& a) { return estimate_step(LinearOperator::dense(a)); }

Vector init_pseudo_inverse(const Matrix& a, const Vector& y) {
  if (a.rows() != y.size()) throw Error(Errc::shape, "pseudo-inverse: A rows != y length");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
  Vector uty = svd.matrixU().transpose() * y;
  for (Index i = 0; i < sv.size(); ++i) uty(i) = sv(i) > cutoff ? uty(i) / sv(i) : 0.0;
  return svd.matrixV() * uty;
}

Vector init_pseudo_inverse(const LinearOperator& a, const Vector& y) {
  if (a.is_identity()) {
    if (y.size() != a.rows()) throw Error(Errc::shape, "pseudo-inverse: A rows != y length");
    return y;
  }
  return init_pseudo_inverse(a.to_dense(), y);
}

Groups elasso_groups(const StructureMatrix& s) {
  const Matrix d = s.dense();
  Groups groups;
  for (Index i = 0; i < d.rows(); ++i) {
    std::vector<Index> g;
    for (Index j = 0; j < d.cols(); ++j) {
      if (d(i, j) + (i == j ? 1.0 : 0.0) == 1.0) g.push_back(j);
    }
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(std::move(g));
  }
  return groups;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector initial_point(const Problem& p, const SolverOptions& opts) {
  switch (opts.init) {
    case Init::zeros: return Vector::Zero(p.num_vars());
    case Init::given:
      if (opts.x0.size() != p.num_vars()) throw Error(Errc::shape, "initial point has wrong length");
      return opts.x0;
    case Init::pseudo_inverse: break;
  }
  return init_pseudo_inverse(p.a, p.y);
}

// 1/2||Ax - y||^2 + lambda |x|^T S |x| + extra_l1 ||x||_1 with B = I, phi = |.|.
class CanonicalModel {
 public:
  CanonicalModel(const Problem& p, const SolverOptions& opts) : p_(p), opts_(opts), s_(p.penalty().structure()) {
    p.check();
    if (!p.penalty().is_canonical()) {
      throw Error(Errc::shape, "proximal subgradient solver needs B = I and phi = abs");
    }
    if (p.mode == Mode::composite) throw Error(Errc::shape, "composite problems go through the ADMM solver");
    alpha_ = opts.step_x ? *opts.step_x : estimate_step(p.a);
    alpha_lambda_ = opts.step_multiplier ? *opts.step_multiplier : alpha_;
    if (!(alpha_ > 0.0) || !(alpha_lambda_ > 0.0)) throw Error(Errc::range, "step sizes must be positive");
    if (!(opts.initial_multiplier >= 0.0)) throw Error(Errc::range, "initial multiplier must be >= 0");
  }

  bool constrained() const { return p_.mode == Mode::constrained; }
  double alpha() const { return alpha_; }
  double alpha_lambda() const { return alpha_lambda_; }
  double initial_multiplier() const { return constrained() ? opts_.initial_multiplier : p_.lambda(); }
  double residual(const Vector& x) const { return eval(s_, x); }

  double objective(const Vector& x, double lambda) const {
    double f = 0.5 * (p_.a.apply(x) - p_.y).squaredNorm();
    if (lambda != 0.0) f += lambda * residual(x);
    if (p_.extra_l1 > 0.0) f += p_.extra_l1 * x.lpNorm<1>();
    return std::isfinite(f) ? f : kInf;
  }

  Vector grad_f(const Vector& x) const { return p_.a.apply_transpose(p_.a.apply(x) - p_.y); }

  // prox of alpha (lambda ||.||_1^2 + extra_l1 ||.||_1 + nonneg) after a gradient
  // step on f - lambda |x|^T (11^T - S) |x|.
  Vector step(const Vector& x, const Vector& gf, double lambda, double alpha) const {
    Vector w = x - alpha * gf;
    if (lambda != 0.0) w -= alpha * subgradient_smooth_part(s_, x, lambda);
    if (p_.extra_l1 > 0.0) w = soft_threshold(w, alpha * p_.extra_l1);
    if (p_.nonneg) w = w.cwiseMax(0.0);
    return prox_l1sq(w, 2.0 * alpha * lambda);
  }

  struct Outcome {
    Vector x;
    double objective;
    double alpha;
  };

  // Backtracked step from x; returns x itself when no step decreases the objective.
  Outcome descend(const Vector& x, double fx, double lambda) const {
    const Vector gf = grad_f(x);
    double alpha = alpha_;
    for (int b = 0;; ++b) {
      Vector cand = step(x, gf, lambda, alpha);
      const double obj = objective(cand, lambda);
      if (!opts_.backtracking || obj <= fx) return {std::move(cand), obj, alpha};
      if (b >= opts_.max_backtracks) return {x, fx, alpha};
      alpha *= 0.5;
    }
  }

 private:
  const Problem& p_;
  const SolverOptions& opts_;
  const StructureMatrix& s_;
  double alpha_ = 1.0;
  double alpha_lambda_ = 1.0;
};

bool small_change(const Vector& next, const Vector& prev, double tol) {
  const double change = (next - prev).norm();
  return change == 0.0 || change <= tol * next.norm();
}

void record(SolveResult& res, const SolverOptions& opts, const TraceRecord& rec) {
  res.trace.push_back(rec);
  res.objective_trace.push_back(rec.objective);
  if (opts.on_iteration) opts.on_iteration(rec);
}

}  // namespace

SolveResult solve_swagger_constrained(const Problem& problem, const SolverOptions& opts) {
  if (opts.accelerated) return solve_swagger_accelerated(problem, opts);
  const CanonicalModel model(problem, opts);
  SolveResult res;
  Vector x = initial_point(problem, opts);
  double lambda = model.initial_multiplier();
  for (int k = 1; k <= opts.max_iters; ++k) {
    const double fx = model.objective(x, lambda);
    auto out = model.descend(x, fx, lambda);
    const double r_prev = model.residual(x);
    const double r_next = model.residual(out.x);
    record(res, opts, {k, fx, out.objective, r_next, out.alpha, lambda});
    res.iterations = k;
    if (!std::isfinite(out.objective) || !out.x.allFinite()) {
      res.status = Status::diverged;
      break;
    }
    if (model.constrained()) lambda += model.alpha_lambda() * r_prev;
    const bool settled = small_change(out.x, x, opts.tol_rel_change);
    x = std::move(out.x);
    if (settled && (!model.constrained() || r_next < opts.tol_constraint)) {
      res.status = Status::converged;
      break;
    }
  }
  res.x_hat = std::move(x);
  res.constraint_residual = model.residual(res.x_hat);
  res.multiplier = lambda;
  return res;
}

double next_momentum(double t) { return 0.5 * (std::sqrt(4.0 * t * t + 1.0) + 1.0); }

SolveResult solve_swagger_accelerated(const Problem& problem, const SolverOptions& opts) {
  const CanonicalModel model(problem, opts);
  SolveResult res;
  Vector x = initial_point(problem, opts);
  Vector x_prev = x;
  Vector z = x;
  double t_prev = 0.0;
  double t = 1.0;
  double lambda = model.initial_multiplier();
  for (int k = 1; k <= opts.max_iters; ++k) {
    const Vector y = x + (t_prev / t) * (z - x) + ((t_prev - 1.0) / t) * (x - x_prev);
    const double fx = model.objective(x, lambda);
    Vector z_next = model.step(y, model.grad_f(y), lambda, model.alpha());
    const double fz = model.objective(z_next, lambda);
    auto v = model.descend(x, fx, lambda);

    Vector x_next;
    double f_next;
    if (fz <= v.objective) {
      x_next = z_next;
      f_next = fz;
    } else {
      x_next = std::move(v.x);
      f_next = v.objective;
    }
    const double r_prev = model.residual(x);
    const double r_next = model.residual(x_next);
    record(res, opts, {k, fx, f_next, r_next, v.alpha, lambda});
    res.iterations = k;
    if (!std::isfinite(f_next) || !x_next.allFinite()) {
      res.status = Status::diverged;
      break;
    }

    t_prev = t;
    t = next_momentum(t);
    if (model.constrained()) lambda += model.alpha_lambda() * r_prev;

    const bool settled = small_change(x_next, x, opts.tol_rel_change);
    x_prev = std::move(x);
    x = std::move(x_next);
    z = std::move(z_next);
    if (settled && (!model.constrained() || r_next < opts.tol_constraint)) {
      res.status = Status::converged;
      break;
    }
  }
  res.x_hat = std::move(x);
  res.constraint_residual = model.residual(res.x_hat);
  res.multiplier = lambda;
  return res;
}

}  // namespace swagger
