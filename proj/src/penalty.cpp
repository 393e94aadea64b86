#include "swagger/penalty.hpp"

#include <cmath>

#include "swagger/error.hpp"

namespace swagger {

namespace {

void check_length(const StructureMatrix& s, const Vector& x) {
  if (x.size() != s.dim()) {
    throw Error(Errc::shape, "vector of length " + std::to_string(x.size()) + " against structure of dim " +
                                 std::to_string(s.dim()));
  }
}

Eigen::SelfAdjointEigenSolver<Matrix> eigenvalues_of(const Matrix& m) {
  if (!m.allFinite()) throw Error(Errc::numeric, "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::numeric, "symmetric eigensolver did not converge");
  return es;
}

}  // namespace

PenaltyConfig::PenaltyConfig(LinearOperator op, Nonlinearity phi, StructureMatrix s)
    : op_(std::move(op)), phi_(phi), s_(std::move(s)) {
  if (s_.dim() != op_.rows()) {
    throw Error(Errc::shape, "structure dim " + std::to_string(s_.dim()) + " does not match " + op_.name());
  }
  const auto report = validate(s_, phi_);
  if (!report.ok()) throw Error(Errc::invalid_structure, report.summary());
}

PenaltyConfig PenaltyConfig::canonical(StructureMatrix s) {
  const Index m = s.dim();
  return PenaltyConfig(LinearOperator::identity(m), Nonlinearity::abs(), std::move(s));
}

double eval(const StructureMatrix& s, const Vector& x) {
  check_length(s, x);
  const Vector a = x.cwiseAbs();
  return a.dot(s.apply(a));
}

double eval(const PenaltyConfig& cfg, const Vector& x) {
  const Vector phi = cfg.phi().apply(cfg.op().apply(x));
  return phi.dot(cfg.structure().apply(phi));
}

Vector gradient(const PenaltyConfig& cfg, const Vector& x) {
  const Vector bx = cfg.op().apply(x);
  const Vector phi = cfg.phi().apply(bx);
  const Vector inner = 2.0 * cfg.phi().derivative(bx).cwiseProduct(cfg.structure().apply(phi));
  return cfg.op().apply_transpose(inner);
}

Decomposition eval_decomposed(const StructureMatrix& s, const Vector& x) {
  check_length(s, x);
  const Vector a = x.cwiseAbs();
  Decomposition d;
  const double l1 = a.sum();
  d.l1sq = l1 * l1;
  d.l2sq = a.squaredNorm();
  if (s.overlap_free()) return d;
  // Off-diagonal sum of (1 - S_ij)|x_i||x_j|, evaluated directly.
  const Matrix dense = s.dense();
  double overlap = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) == 0.0) continue;
    double row = 0.0;
    for (Index j = 0; j < a.size(); ++j) {
      if (j != i) row += (1.0 - dense(i, j)) * a(j);
    }
    overlap += a(i) * row;
  }
  d.overlap = overlap;
  return d;
}

Vector complement_apply(const StructureMatrix& s, const Vector& abs_x) {
  check_length(s, abs_x);
  if (s.overlap_free()) return abs_x;  // 11^T - S = I
  return Vector::Constant(abs_x.size(), abs_x.sum()) - s.apply(abs_x);
}

Vector subgradient_smooth_part(const StructureMatrix& s, const Vector& x, double lambda) {
  const Vector a = x.cwiseAbs();
  return -2.0 * lambda * sign(x).cwiseProduct(complement_apply(s, a));
}

Matrix hessian(const StructureMatrix& s, const Vector& x) {
  check_length(s, x);
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) == 0.0) throw Error(Errc::kink, "hessian undefined at x_" + std::to_string(i) + " = 0");
  }
  const Vector sg = sign(x);
  return 2.0 * sg.asDiagonal() * s.dense() * sg.asDiagonal();
}

double min_eigenvalue(const Matrix& symmetric) { return eigenvalues_of(symmetric).eigenvalues().minCoeff(); }

double max_eigenvalue(const Matrix& symmetric) { return eigenvalues_of(symmetric).eigenvalues().maxCoeff(); }

CncShift cnc_shift(const StructureMatrix& s, const Matrix& a, double lambda) {
  if (a.cols() != s.dim()) {
    throw Error(Errc::shape, "A has " + std::to_string(a.cols()) + " columns, S has dim " + std::to_string(s.dim()));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(Errc::range, "lambda must be positive and finite");
  CncShift out;
  out.lambda = lambda;
  out.lambda_min_s = min_eigenvalue(s.dense());
  out.lambda_min_ata = min_eigenvalue(a.transpose() * a);
  out.c = out.lambda_min_s + out.lambda_min_ata / (2.0 * lambda);
  return out;
}

double eta_interpolant(const Vector& x, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(Errc::range, "eta must lie in [0, 1]");
  const double l1 = x.cwiseAbs().sum();
  return l1 * l1 - eta * x.squaredNorm();
}

}  // namespace swagger
