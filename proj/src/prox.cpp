#include "swagger/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "swagger/error.hpp"

namespace swagger {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(Errc::range, "lambda must be finite and >= 0");
}

Vector shrink_by(const Vector& z, double tau) {
  return z.unaryExpr([tau](double v) { return std::max(std::abs(v) - tau, 0.0) * sign(v); });
}

}  // namespace

L1SqThreshold l1sq_threshold(const Vector& z, double lambda) {
  check_lambda(lambda);
  const Index n = z.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  // Stable so ties keep index order.
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(z(a)) > std::abs(z(b)); });

  L1SqThreshold out;
  double cum = 0.0;
  double cum_at_rho = 0.0;
  for (Index j = 1; j <= n; ++j) {
    const double yj = std::abs(z(order[static_cast<std::size_t>(j - 1)]));
    cum += yj;
    if (yj - lambda / (1.0 + static_cast<double>(j) * lambda) * cum > 0.0) {
      out.rho = j;
      cum_at_rho = cum;
    }
  }
  if (out.rho > 0) out.tau = lambda / (1.0 + static_cast<double>(out.rho) * lambda) * cum_at_rho;
  return out;
}

Vector prox_l1sq(const Vector& z, double lambda) {
  check_lambda(lambda);
  if (lambda == 0.0) return z;
  const auto t = l1sq_threshold(z, lambda);
  if (t.rho == 0) return Vector::Zero(z.size());
  return shrink_by(z, t.tau);
}

Vector soft_threshold(const Vector& z, double lambda) {
  check_lambda(lambda);
  return shrink_by(z, lambda);
}

Vector p_shrink(const Vector& z, double lambda, double p) {
  check_lambda(lambda);
  if (!(p > 0.0 && p <= 1.0)) throw Error(Errc::range, "p must lie in (0, 1]");
  if (p == 1.0) return shrink_by(z, lambda);
  const double scale = std::pow(lambda, 2.0 - p);
  return z.unaryExpr([&](double v) {
    const double a = std::abs(v);
    if (a == 0.0) return 0.0;
    return std::max(a - scale * std::pow(a, p - 1.0), 0.0) * sign(v);
  });
}

bool groups_disjoint(const Groups& groups) {
  std::unordered_set<Index> seen;
  for (const auto& g : groups) {
    for (Index i : g) {
      if (!seen.insert(i).second) return false;
    }
  }
  return true;
}

Vector prox_elasso(const Vector& z, const Groups& groups, double lambda) {
  check_lambda(lambda);
  if (!groups_disjoint(groups)) throw Error(Errc::not_separable, "groups overlap; no exact E-LASSO prox");
  Vector out = z;
  for (const auto& g : groups) {
    Vector sub(static_cast<Index>(g.size()));
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g[k] < 0 || g[k] >= z.size()) throw Error(Errc::shape, "group index out of range");
      sub(static_cast<Index>(k)) = z(g[k]);
    }
    const Vector q = prox_l1sq(sub, lambda);
    for (std::size_t k = 0; k < g.size(); ++k) out(g[k]) = q(static_cast<Index>(k));
  }
  return out;
}

}  // namespace swagger
