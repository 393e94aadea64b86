#include <algorithm>
#include <cmath>
#include <limits>

#include "swagger/error.hpp"
#include "swagger/experiments.hpp"

namespace swagger {

SolverOptions LntvOptions::default_lntv_solver() {
  SolverOptions o;
  o.max_iters = 3000;
  o.admm_tol = 1e-6;
  o.inner_iters = 200;
  o.tol_rel_change = 1e-9;
  return o;
}

SignalResult lntv_denoise_1d(const Vector& y, Index n, const LntvOptions& opts) {
  const Index len = y.size();
  if (n < 1) throw Error(Errc::invalid_band, "separation n must be >= 1");
  if (len < n + 2) throw Error(Errc::invalid_dimension, "signal length must be at least n + 2");
  if (!(opts.lambda_lntv >= 0.0) || !(opts.lambda_tv >= 0.0)) throw Error(Errc::range, "negative strength");

  const auto d = LinearOperator::fwd_diff_1d(len);
  std::vector<SwaggerTerm> sw;
  std::vector<L1Term> l1;
  if (opts.lambda_lntv > 0.0) {
    sw.push_back({PenaltyConfig(d, Nonlinearity::abs(), build_local_neighborhood(len - 1, n, opts.weights)),
                  opts.lambda_lntv});
  }
  if (opts.lambda_tv > 0.0) l1.push_back({d, opts.lambda_tv});

  SignalResult out;
  if (sw.empty() && l1.empty()) {
    out.x = y;
    out.solve.x_hat = y;
    out.solve.status = Status::converged;
    return out;
  }
  auto p = Problem::composite(LinearOperator::identity(len), y, std::move(sw), std::move(l1));
  out.solve = solve_swagger_admm(p, opts.solver, opts.rho);
  out.x = out.solve.x_hat;
  return out;
}

std::vector<Index> change_points(const Vector& x, double tol) {
  std::vector<Index> cp;
  for (Index i = 0; i + 1 < x.size(); ++i) {
    if (std::abs(x(i + 1) - x(i)) > tol) cp.push_back(i);
  }
  return cp;
}

Index min_change_gap(const Vector& x, double tol) {
  const auto cp = change_points(x, tol);
  Index gap = std::numeric_limits<Index>::max();
  for (std::size_t k = 1; k < cp.size(); ++k) gap = std::min(gap, cp[k] - cp[k - 1]);
  return gap;
}

LinearOperator blur_operator(Index height, Index width, const GaussianKernel& kernel) {
  if (height < 1 || width < 1) throw Error(Errc::invalid_dimension, "image must be nonempty");
  if (kernel.radius < 0) throw Error(Errc::range, "kernel radius must be >= 0");
  if (kernel.radius == 0) return LinearOperator::identity(height * width);
  if (!(kernel.sigma > 0.0)) throw Error(Errc::range, "kernel sigma must be positive");
  const Index r = kernel.radius;
  if (2 * r + 1 > height || 2 * r + 1 > width) {
    throw Error(Errc::shape, "kernel of size " + std::to_string(2 * r + 1) + " exceeds image " +
                                 std::to_string(height) + "x" + std::to_string(width));
  }

  Matrix k(2 * r + 1, 2 * r + 1);
  for (Index i = -r; i <= r; ++i) {
    for (Index j = -r; j <= r; ++j) {
      k(i + r, j + r) = std::exp(-static_cast<double>(i * i + j * j) / (2.0 * kernel.sigma * kernel.sigma));
    }
  }
  k /= k.sum();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(height * width * k.size()));
  for (Index c = 0; c < width; ++c) {
    for (Index rr = 0; rr < height; ++rr) {
      for (Index i = -r; i <= r; ++i) {
        for (Index j = -r; j <= r; ++j) {
          const Index sr = std::clamp<Index>(rr + i, 0, height - 1);
          const Index sc = std::clamp<Index>(c + j, 0, width - 1);
          trips.emplace_back(rr + c * height, sr + sc * height, k(i + r, j + r));
        }
      }
    }
  }
  SparseMatrix m(height * width, height * width);
  m.setFromTriplets(trips.begin(), trips.end());
  return LinearOperator::sparse(std::move(m), "blur");
}

ImageResult lntv_deblur_2d(const Image& observed, const GaussianKernel& blur, Index n, const Lntv2dOptions& opts) {
  const Index h = observed.height;
  const Index w = observed.width;
  if (observed.pixels.size() != h * w) throw Error(Errc::shape, "pixel count does not match image size");
  if (n < 1) throw Error(Errc::invalid_band, "separation n must be >= 1");
  if (h < n + 2 || w < n + 2) throw Error(Errc::invalid_dimension, "image sides must be at least n + 2");
  if (!(opts.lambda_lntv >= 0.0) || !(opts.lambda_tv >= 0.0)) throw Error(Errc::range, "negative strength");

  const auto a = blur_operator(h, w, blur);
  const auto dh = LinearOperator::fwd_diff_2d_horizontal(h, w);
  const auto dv = LinearOperator::fwd_diff_2d_vertical(h, w);
  const auto phi = Nonlinearity::power(opts.kappa);

  std::vector<SwaggerTerm> sw;
  std::vector<L1Term> l1;
  if (opts.lambda_lntv > 0.0) {
    sw.push_back({PenaltyConfig(dh, phi, build_local_neighborhood_strips(h, w - 1, n, opts.weights)), opts.lambda_lntv});
    sw.push_back({PenaltyConfig(dv, phi, build_local_neighborhood_strips(w, h - 1, n, opts.weights)), opts.lambda_lntv});
  }
  if (opts.lambda_tv > 0.0) {
    l1.push_back({dh, opts.lambda_tv});
    l1.push_back({dv, opts.lambda_tv});
  }

  ImageResult out;
  out.image = observed;
  if (sw.empty() && l1.empty() && a.is_identity()) {
    out.solve.x_hat = observed.pixels;
    out.solve.status = Status::converged;
    return out;
  }
  auto p = Problem::composite(a, observed.pixels, std::move(sw), std::move(l1));
  out.solve = solve_swagger_admm(p, opts.solver, opts.rho);
  out.image.pixels = out.solve.x_hat;
  return out;
}

}  // namespace swagger
