#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "swagger/types.hpp"

namespace swagger {

/// A linear map R^N -> R^M, either a named operator or an explicit matrix.
///
/// Images are flattened column-major (pixel (r, c) -> r + c * height). The 2-D
/// difference operators order their outputs strip by strip: horizontal
/// differences row after row, vertical differences column after column, so a
/// strip-wise local-neighbourhood matrix never couples neighbouring strips.
class LinearOperator {
 public:
  enum class Kind { identity, fwd_diff_1d, fwd_diff_2d_horizontal, fwd_diff_2d_vertical, dense, sparse };

  LinearOperator() : LinearOperator(identity(0)) {}

  static LinearOperator identity(Index n);
  /// (n-1) x n forward differences: (Dx)_i = x_{i+1} - x_i.
  static LinearOperator fwd_diff_1d(Index n);
  /// height*(width-1) differences x(r, c+1) - x(r, c).
  static LinearOperator fwd_diff_2d_horizontal(Index height, Index width);
  /// (height-1)*width differences x(r+1, c) - x(r, c).
  static LinearOperator fwd_diff_2d_vertical(Index height, Index width);
  static LinearOperator dense(Matrix m);
  static LinearOperator sparse(SparseMatrix m, std::string label = "sparse");

  Kind kind() const noexcept { return kind_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool is_identity() const noexcept { return kind_ == Kind::identity; }

  Vector apply(const Vector& x) const;
  Vector apply_transpose(const Vector& y) const;

  SparseMatrix to_sparse() const;
  Matrix to_dense() const;

  /// e.g. "fwd-diff-1d[99x100]".
  std::string name() const;

 private:
  LinearOperator(Kind kind, Index rows, Index cols) : kind_(kind), rows_(rows), cols_(cols) {}

  Kind kind_;
  Index rows_ = 0;
  Index cols_ = 0;
  std::shared_ptr<const Matrix> dense_;
  std::shared_ptr<const SparseMatrix> sparse_;
  std::string label_;
};

std::ostream& operator<<(std::ostream& os, const LinearOperator& op);

}  // namespace swagger
