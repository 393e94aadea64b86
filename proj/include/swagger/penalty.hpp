#pragma once

#include "swagger/linear_operator.hpp"
#include "swagger/structure.hpp"

namespace swagger {

/// R(x) = phi(Bx)^T S phi(Bx).
class PenaltyConfig {
 public:
  /// Throws invalid-structure if S fails validation, shape if S.dim() != B.rows().
  PenaltyConfig(LinearOperator op, Nonlinearity phi, StructureMatrix s);

  /// B = I, phi = abs.
  static PenaltyConfig canonical(StructureMatrix s);

  const LinearOperator& op() const noexcept { return op_; }
  const Nonlinearity& phi() const noexcept { return phi_; }
  const StructureMatrix& structure() const noexcept { return s_; }
  Index input_dim() const noexcept { return op_.cols(); }

  /// B = I and phi = |.|, the case the l1^2 splitting applies to.
  bool is_canonical() const noexcept { return op_.is_identity() && phi_.is_abs(); }

 private:
  LinearOperator op_;
  Nonlinearity phi_;
  StructureMatrix s_;
};

double eval(const PenaltyConfig& cfg, const Vector& x);

/// |x|^T S |x|.
double eval(const StructureMatrix& s, const Vector& x);

/// Gradient of R away from kinks: B^T (phi'(Bx) .* 2 S phi(Bx)), sign(0) = 0.
Vector gradient(const PenaltyConfig& cfg, const Vector& x);

/// |x|^T S |x| = l1sq - l2sq - overlap, overlap = |x|^T (11^T - S - I) |x|.
struct Decomposition {
  double l1sq = 0.0;
  double l2sq = 0.0;
  double overlap = 0.0;

  double value() const noexcept { return l1sq - l2sq - overlap; }
};

Decomposition eval_decomposed(const StructureMatrix& s, const Vector& x);

/// (11^T - S) |x|, computed without forming the dense complement.
Vector complement_apply(const StructureMatrix& s, const Vector& abs_x);

/// Gradient of -lambda |x|^T (11^T - S) |x|: -2 lambda sign(x) .* ((11^T - S)|x|).
Vector subgradient_smooth_part(const StructureMatrix& s, const Vector& x, double lambda);

/// 2 X S X with X = diag(sign(x)); every x_i must be nonzero.
Matrix hessian(const StructureMatrix& s, const Vector& x);

struct CncShift {
  double c = 0.0;
  double lambda = 0.0;
  double lambda_min_s = 0.0;
  double lambda_min_ata = 0.0;
};

/// Diagonal shift c = lambda_min(S) + lambda_min(A^T A) / (2 lambda) that keeps
/// 1/2||Ax - y||^2 + lambda |x|^T (S - cI) |x| convex.
CncShift cnc_shift(const StructureMatrix& s, const Matrix& a, double lambda);

/// ||x||_1^2 - eta ||x||_2^2, eta in [0, 1].
double eta_interpolant(const Vector& x, double eta);

/// Smallest eigenvalue of a dense symmetric matrix.
double min_eigenvalue(const Matrix& symmetric);
double max_eigenvalue(const Matrix& symmetric);

}  // namespace swagger
