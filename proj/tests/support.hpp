#pragma once

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Nothing here calls into the code under test except for constructing inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "swagger/experiments.hpp"

namespace testing_support {

using swagger::Index;
using swagger::Matrix;
using swagger::Vector;

inline Vector gaussian_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline Matrix gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

/// Entries bounded away from zero, so |.| is differentiable everywhere nearby.
inline Vector kink_free_vector(std::mt19937_64& rng, Index n, double lo = 0.2, double hi = 2.0) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution neg(0.5);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = neg(rng) ? -mag(rng) : mag(rng);
  return v;
}

/// Symmetric hollow matrix; each off-diagonal pair is zero with probability `zero_prob`
/// and otherwise uniform on (0, 1].
inline Matrix random_structure_dense(std::mt19937_64& rng, Index n, double zero_prob = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = u(rng) < zero_prob ? 0.0 : 1.0 - u(rng);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

/// sum_ij |x_i| S_ij |x_j| by explicit double loop.
inline double quadratic_form(const Matrix& s, const Vector& x) {
  double total = 0.0;
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = 0; j < s.cols(); ++j) total += std::abs(x(i)) * s(i, j) * std::abs(x(j));
  return total;
}

/// A support is feasible when no two of its members share a positive entry of S.
inline bool support_feasible(const Matrix& s, std::uint32_t mask) {
  const Index n = s.rows();
  for (Index i = 0; i < n; ++i) {
    if (!(mask >> i & 1u)) continue;
    for (Index j = 0; j < n; ++j) {
      if (i != j && (mask >> j & 1u) && s(i, j) > 0.0) return false;
    }
  }
  return true;
}

/// 1/2 ||z - q||^2 + lambda/2 ||q||_1^2.
inline double l1sq_prox_objective(const Vector& z, const Vector& q, double lambda) {
  const double l1 = q.lpNorm<1>();
  return 0.5 * (z - q).squaredNorm() + 0.5 * lambda * l1 * l1;
}

/// Minimizer of the l1^2 prox objective by enumerating supports. On a fixed support T
/// with signs of z, stationarity gives q_i = |z_i| - lambda * sum_T q, which is linear
/// and solved in closed form; the best candidate with all q_i >= 0 wins.
inline Vector l1sq_prox_by_enumeration(const Vector& z, double lambda) {
  const Index n = z.size();
  Vector best = Vector::Zero(n);
  double best_obj = l1sq_prox_objective(z, best, lambda);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double sum_abs = 0.0;
    int count = 0;
    for (Index i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        sum_abs += std::abs(z(i));
        ++count;
      }
    }
    const double total = sum_abs / (1.0 + count * lambda);
    Vector q = Vector::Zero(n);
    bool ok = true;
    for (Index i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      const double m = std::abs(z(i)) - lambda * total;
      if (m < 0.0) ok = false;
      q(i) = z(i) < 0.0 ? -m : m;
    }
    if (!ok) continue;
    const double obj = l1sq_prox_objective(z, q, lambda);
    if (obj < best_obj) {
      best_obj = obj;
      best = q;
    }
  }
  return best;
}

/// Central differences of f at x.
inline Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                                         double h = 1e-6) {
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Smallest eigenvalue via a plain Jacobi sweep, independent of the library's eigensolver.
inline double jacobi_min_eigenvalue(Matrix a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-24) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  return a.diagonal().minCoeff();
}

/// Best least-squares objective over all supports with at most one nonzero.
inline double best_one_sparse_objective(const Matrix& a, const Vector& y) {
  const double base = 0.5 * y.squaredNorm();
  double best = base;
  for (Index i = 0; i < a.cols(); ++i) {
    const double norm2 = a.col(i).squaredNorm();
    if (norm2 == 0.0) continue;
    const double c = a.col(i).dot(y);
    best = std::min(best, base - 0.5 * c * c / norm2);
  }
  return best;
}

/// Piecewise-constant signal with segment lengths in [min_seg, max_seg], levels in
/// [-1, 1] and jumps of at least 0.3 between neighbouring segments.
inline Vector piecewise_constant(std::mt19937_64& rng, Index len, Index min_seg, Index max_seg) {
  std::uniform_int_distribution<Index> seg(min_seg, max_seg);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  Vector x(len);
  Index i = 0;
  double v = level(rng);
  while (i < len) {
    Index l = seg(rng);
    if (len - (i + l) < min_seg) l = len - i;
    x.segment(i, l).setConstant(v);
    i += l;
    double next;
    do next = level(rng);
    while (std::abs(next - v) < 0.3);
    v = next;
  }
  return x;
}

/// Adds white Gaussian noise at the given SNR (dB, signal power per sample).
inline Vector add_noise(std::mt19937_64& rng, const Vector& x, double snr_db) {
  const double sigma = std::sqrt(x.squaredNorm() / (x.size() * std::pow(10.0, snr_db / 10.0)));
  return x + gaussian_vector(rng, x.size(), sigma);
}

/// One axis-aligned rectangle inside each cell of a 2x2 grid on a 0.2 background.
/// Sides and gaps are at least `min_side` pixels.
inline swagger::Image rectangles(std::mt19937_64& rng, Index height, Index width, Index min_side) {
  swagger::Image img{height, width, Vector::Constant(height * width, 0.2)};
  std::uniform_real_distribution<double> level(0.4, 1.0);
  const Index ch = height / 2;
  const Index cw = width / 2;
  for (Index cr = 0; cr < 2; ++cr) {
    for (Index cc = 0; cc < 2; ++cc) {
      const Index rh = std::uniform_int_distribution<Index>(min_side, ch - min_side)(rng);
      const Index rw = std::uniform_int_distribution<Index>(min_side, cw - min_side)(rng);
      const Index r0 = cr * ch + std::uniform_int_distribution<Index>(min_side / 2, ch - rh - min_side / 2)(rng);
      const Index c0 = cc * cw + std::uniform_int_distribution<Index>(min_side / 2, cw - rw - min_side / 2)(rng);
      const double v = level(rng);
      for (Index r = r0; r < r0 + rh; ++r)
        for (Index c = c0; c < c0 + rw; ++c) img.at(r, c) = v;
    }
  }
  return img;
}

}  // namespace testing_support
