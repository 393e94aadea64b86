#include "swagger/linear_operator.hpp"

#include <ostream>
#include <vector>

#include "swagger/error.hpp"

namespace swagger {

namespace {

using Triplet = Eigen::Triplet<double>;

std::shared_ptr<const SparseMatrix> make_sparse(Index rows, Index cols, const std::vector<Triplet>& t) {
  auto m = std::make_shared<SparseMatrix>(rows, cols);
  m->setFromTriplets(t.begin(), t.end());
  m->makeCompressed();
  return m;
}

void check_extent(Index n, const char* what) {
  if (n < 1) throw Error(Errc::invalid_dimension, std::string(what) + " must be >= 1");
}

}  // namespace

LinearOperator LinearOperator::identity(Index n) {
  LinearOperator op(Kind::identity, n, n);
  op.label_ = "identity";
  return op;
}

LinearOperator LinearOperator::fwd_diff_1d(Index n) {
  if (n < 2) throw Error(Errc::invalid_dimension, "fwd-diff-1d needs n >= 2");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * (n - 1)));
  for (Index i = 0; i + 1 < n; ++i) {
    t.emplace_back(i, i, -1.0);
    t.emplace_back(i, i + 1, 1.0);
  }
  LinearOperator op(Kind::fwd_diff_1d, n - 1, n);
  op.sparse_ = make_sparse(n - 1, n, t);
  op.label_ = "fwd-diff-1d";
  return op;
}

LinearOperator LinearOperator::fwd_diff_2d_horizontal(Index height, Index width) {
  check_extent(height, "height");
  if (width < 2) throw Error(Errc::invalid_dimension, "horizontal differences need width >= 2");
  const Index rows = height * (width - 1);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * rows));
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c + 1 < width; ++c) {
      const Index out = c + r * (width - 1);
      t.emplace_back(out, r + c * height, -1.0);
      t.emplace_back(out, r + (c + 1) * height, 1.0);
    }
  }
  LinearOperator op(Kind::fwd_diff_2d_horizontal, rows, height * width);
  op.sparse_ = make_sparse(rows, height * width, t);
  op.label_ = "fwd-diff-2d-horizontal";
  return op;
}

LinearOperator LinearOperator::fwd_diff_2d_vertical(Index height, Index width) {
  check_extent(width, "width");
  if (height < 2) throw Error(Errc::invalid_dimension, "vertical differences need height >= 2");
  const Index rows = (height - 1) * width;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * rows));
  for (Index c = 0; c < width; ++c) {
    for (Index r = 0; r + 1 < height; ++r) {
      const Index out = r + c * (height - 1);
      t.emplace_back(out, r + c * height, -1.0);
      t.emplace_back(out, r + 1 + c * height, 1.0);
    }
  }
  LinearOperator op(Kind::fwd_diff_2d_vertical, rows, height * width);
  op.sparse_ = make_sparse(rows, height * width, t);
  op.label_ = "fwd-diff-2d-vertical";
  return op;
}

LinearOperator LinearOperator::dense(Matrix m) {
  LinearOperator op(Kind::dense, m.rows(), m.cols());
  op.dense_ = std::make_shared<const Matrix>(std::move(m));
  op.label_ = "dense";
  return op;
}

LinearOperator LinearOperator::sparse(SparseMatrix m, std::string label) {
  m.makeCompressed();
  LinearOperator op(Kind::sparse, m.rows(), m.cols());
  op.sparse_ = std::make_shared<const SparseMatrix>(std::move(m));
  op.label_ = std::move(label);
  return op;
}

Vector LinearOperator::apply(const Vector& x) const {
  if (x.size() != cols_) {
    throw Error(Errc::shape, name() + " expects input of length " + std::to_string(cols_) + ", got " +
                                 std::to_string(x.size()));
  }
  if (kind_ == Kind::identity) return x;
  if (dense_) return (*dense_) * x;
  return (*sparse_) * x;
}

Vector LinearOperator::apply_transpose(const Vector& y) const {
  if (y.size() != rows_) {
    throw Error(Errc::shape, name() + "^T expects input of length " + std::to_string(rows_) + ", got " +
                                 std::to_string(y.size()));
  }
  if (kind_ == Kind::identity) return y;
  if (dense_) return dense_->transpose() * y;
  return sparse_->transpose() * y;
}

SparseMatrix LinearOperator::to_sparse() const {
  if (kind_ == Kind::identity) {
    SparseMatrix eye(rows_, cols_);
    eye.setIdentity();
    return eye;
  }
  if (dense_) return dense_->sparseView();
  return *sparse_;
}

Matrix LinearOperator::to_dense() const {
  if (kind_ == Kind::identity) return Matrix::Identity(rows_, cols_);
  if (dense_) return *dense_;
  return Matrix(*sparse_);
}

std::string LinearOperator::name() const {
  return label_ + "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

std::ostream& operator<<(std::ostream& os, const LinearOperator& op) { return os << op.name(); }

}  // namespace swagger
