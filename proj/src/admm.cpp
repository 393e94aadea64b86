#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "swagger/error.hpp"
#include "swagger/solvers.hpp"

namespace swagger {

namespace {

// argmin_t 1/2 (t - v)^2 + c phi(t), c >= 0.
double scalar_prox(const Nonlinearity& phi, double v, double c) {
  if (c == 0.0) return v;
  switch (phi.family()) {
    case Nonlinearity::Family::rect_pos: return v > c ? v - c : std::min(v, 0.0);
    case Nonlinearity::Family::rect_neg: return v < -c ? v + c : std::max(v, 0.0);
    case Nonlinearity::Family::abs: return sign(v) * std::max(std::abs(v) - c, 0.0);
    case Nonlinearity::Family::power: break;
  }
  const double k = phi.kappa();
  const double a = std::abs(v);
  if (a == 0.0) return 0.0;
  if (k == 1.0) return sign(v) * std::max(a - c, 0.0);
  // Stationary points solve h(t) = t + c k t^(k-1) - a = 0 on (0, a].
  auto h = [&](double t) { return t + c * k * std::pow(t, k - 1.0) - a; };
  double lo;
  if (k < 1.0) {
    // h is convex with its minimum at t_min; the local minimizer is the larger root.
    const double t_min = std::pow(c * k * (1.0 - k), 1.0 / (2.0 - k));
    if (t_min >= a || h(t_min) > 0.0) return 0.0;
    lo = t_min;
  } else {
    lo = 0.0;
  }
  double hi = a;
  for (int it = 0; it < 100 && hi - lo > 1e-15 * a; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  const double t = 0.5 * (lo + hi);
  const double g_t = 0.5 * (t - a) * (t - a) + c * std::pow(t, k);
  return g_t < 0.5 * a * a ? sign(v) * t : 0.0;
}

// argmin_z 1/2||z - v||^2 + weight * phi(z)^T S phi(z) by exact coordinate
// minimization; S is hollow, so each coordinate sees c_i phi(z_i) with
// c_i = 2 weight (S phi(z))_i.
Vector coordinate_denoise(const StructureMatrix& s, const Nonlinearity& phi, const Vector& v, double weight,
                          const SolverOptions& opts, const Vector& start) {
  Vector z = start.size() == v.size() ? start : v;
  Vector f = phi.apply(z);
  const SparseMatrix& m = s.sparse();
  for (int sweep = 0; sweep < opts.inner_iters; ++sweep) {
    double change = 0.0;
    for (Index i = 0; i < z.size(); ++i) {
      double sf = 0.0;
      for (SparseMatrix::InnerIterator it(m, i); it; ++it) sf += it.value() * f(it.row());
      const double zi = scalar_prox(phi, v(i), 2.0 * weight * sf);
      change += (zi - z(i)) * (zi - z(i));
      z(i) = zi;
      f(i) = phi(zi);
    }
    if (std::sqrt(change) <= opts.tol_rel_change * std::max(z.norm(), 1e-300)) break;
  }
  return z;
}

struct Block {
  enum class Kind { swagger, l1, nonneg } kind;
  LinearOperator op;
  const SwaggerTerm* term = nullptr;
  double strength = 0.0;
  bool constrained = false;
  Vector z;
  Vector u;
};

class XUpdate {
 public:
  XUpdate(const Problem& p, const std::vector<Block>& blocks) {
    const SparseMatrix a = p.a.to_sparse();
    ata_ = a.transpose() * a;
    aty_ = p.a.apply_transpose(p.y);
    btb_.resize(p.num_vars(), p.num_vars());
    for (const auto& b : blocks) {
      const SparseMatrix bs = b.op.to_sparse();
      btb_ += SparseMatrix(bs.transpose() * bs);
    }
  }

  void factor(double rho) {
    const SparseMatrix h = ata_ + rho * btb_;
    ldlt_.compute(h);
    if (ldlt_.info() != Eigen::Success) {
      throw Error(Errc::numeric, "x-update factorization failed (rho=" + std::to_string(rho) + ")");
    }
    const Vector d = ldlt_.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > 1e-12 * dmax)) {
      throw Error(Errc::numeric, "x-update system A^T A + rho sum B^T B is singular (min pivot " +
                                     std::to_string(d.minCoeff()) + ", max pivot " + std::to_string(dmax) +
                                     "); the data term must fix the null space of the penalty operators");
    }
  }

  Vector solve(const Vector& rhs) const { return ldlt_.solve(rhs); }
  const Vector& aty() const { return aty_; }

 private:
  SparseMatrix ata_;
  SparseMatrix btb_;
  Vector aty_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
};

}  // namespace

Vector swagger_denoise(const StructureMatrix& s, const Vector& v, double weight, bool constrained,
                       const SolverOptions& opts, const Vector& start) {
  auto penalty = PenaltyConfig::canonical(s);
  Problem p = constrained
                  ? Problem::constrained(LinearOperator::identity(s.dim()), v, std::move(penalty))
                  : Problem::regularized(LinearOperator::identity(s.dim()), v, std::move(penalty), weight);
  SolverOptions inner;
  inner.step_x = 1.0;
  // A unit multiplier step overshoots and removes most of v; 0.1 keeps the
  // constrained z-step close to a projection.
  inner.step_multiplier = opts.step_multiplier ? *opts.step_multiplier : 0.1;
  inner.backtracking = opts.backtracking;
  inner.max_backtracks = opts.max_backtracks;
  inner.max_iters = opts.inner_iters;
  inner.tol_rel_change = opts.tol_rel_change;
  inner.tol_constraint = opts.tol_constraint;
  inner.accelerated = opts.accelerated;
  inner.init = Init::given;
  inner.x0 = start.size() == v.size() ? start : v;
  return solve_swagger_constrained(p, inner).x_hat;
}

Vector swagger_denoise(const StructureMatrix& s, const Vector& v, double weight, bool constrained,
                       const SolverOptions& opts) {
  return swagger_denoise(s, v, weight, constrained, opts, v);
}

SolveResult solve_swagger_admm(const Problem& problem, const SolverOptions& opts, double rho) {
  problem.check();
  if (!(rho > 0.0)) throw Error(Errc::range, "rho must be positive");

  std::vector<Block> blocks;
  if (problem.mode == Mode::composite) {
    for (const auto& t : problem.swagger) {
      blocks.push_back({Block::Kind::swagger, t.penalty.op(), &t, t.strength, false, {}, {}});
    }
  } else {
    const auto& t = problem.swagger.front();
    blocks.push_back({Block::Kind::swagger, t.penalty.op(), &t, t.strength, problem.mode == Mode::constrained, {}, {}});
  }
  for (const auto& t : problem.l1) blocks.push_back({Block::Kind::l1, t.op, nullptr, t.strength, false, {}, {}});
  const Index n = problem.num_vars();
  if (problem.extra_l1 > 0.0) {
    blocks.push_back({Block::Kind::l1, LinearOperator::identity(n), nullptr, problem.extra_l1, false, {}, {}});
  }
  if (problem.nonneg) {
    blocks.push_back({Block::Kind::nonneg, LinearOperator::identity(n), nullptr, 0.0, true, {}, {}});
  }

  XUpdate xu(problem, blocks);
  xu.factor(rho);

  Vector x;
  if (opts.init == Init::given) {
    if (opts.x0.size() != n) throw Error(Errc::shape, "initial point has wrong length");
    x = opts.x0;
  } else if (opts.warm_start && problem.a.is_identity()) {
    x = problem.y;
  } else {
    x = xu.solve(xu.aty());
  }
  for (auto& b : blocks) {
    b.z = b.op.apply(x);
    b.u = Vector::Zero(b.z.size());
  }

  auto zstep = [&](const Block& b, const Vector& v) -> Vector {
    switch (b.kind) {
      case Block::Kind::l1: return soft_threshold(v, b.strength / rho);
      case Block::Kind::nonneg: return v.cwiseMax(0.0);
      case Block::Kind::swagger: {
        const auto& cfg = b.term->penalty;
        if (cfg.phi().is_abs()) {
          return swagger_denoise(cfg.structure(), v, b.strength / rho, b.constrained, opts, b.z);
        }
        if (b.constrained) throw Error(Errc::shape, "constrained ADMM needs phi = abs");
        return coordinate_denoise(cfg.structure(), cfg.phi(), v, b.strength / rho, opts, b.z);
      }
    }
    return v;
  };

  auto objective = [&](const Vector& xv) {
    double f = 0.5 * (problem.a.apply(xv) - problem.y).squaredNorm();
    for (const auto& b : blocks) {
      if (b.kind == Block::Kind::swagger && !b.constrained) f += b.strength * eval(b.term->penalty, xv);
      if (b.kind == Block::Kind::l1) f += b.strength * b.op.apply(xv).lpNorm<1>();
    }
    return f;
  };

  SolveResult res;
  double prev_obj = objective(x);
  for (int k = 1; k <= opts.max_iters; ++k) {
    Vector rhs = xu.aty();
    for (const auto& b : blocks) rhs += rho * b.op.apply_transpose(b.z - b.u);
    x = xu.solve(rhs);

    double r2 = 0.0;
    Vector dual = Vector::Zero(n);
    for (auto& b : blocks) {
      const Vector bx = b.op.apply(x);
      Vector z_new = zstep(b, bx + b.u);
      dual += b.op.apply_transpose(z_new - b.z);
      b.z = std::move(z_new);
      b.u += bx - b.z;
      r2 += (bx - b.z).squaredNorm();
    }
    res.primal_residual = std::sqrt(r2);
    res.dual_residual = rho * dual.norm();

    const double obj = objective(x);
    const double resid = problem.swagger.empty() ? 0.0 : eval(problem.penalty(), x);
    res.iterations = k;
    TraceRecord rec{k, prev_obj, obj, resid, rho, 0.0};
    res.trace.push_back(rec);
    res.objective_trace.push_back(obj);
    if (opts.on_iteration) opts.on_iteration(rec);
    prev_obj = obj;
    if (!std::isfinite(obj) || !x.allFinite()) {
      res.status = Status::diverged;
      break;
    }
    if (res.primal_residual < opts.admm_tol && res.dual_residual < opts.admm_tol) {
      res.status = Status::converged;
      break;
    }
    if (opts.adapt_rho) {
      double scale = 1.0;
      if (res.primal_residual > 10.0 * res.dual_residual && rho < 1e6) scale = 2.0;
      else if (res.dual_residual > 10.0 * res.primal_residual && rho > 1e-4) scale = 0.5;
      if (scale != 1.0) {
        rho *= scale;
        for (auto& b : blocks) b.u /= scale;
        xu.factor(rho);
      }
    }
  }
  res.x_hat = std::move(x);
  if (!problem.swagger.empty()) res.constraint_residual = eval(problem.penalty(), res.x_hat);
  return res;
}

}  // namespace swagger
