#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace swagger {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// sign(0) := 0 everywhere in this library.
inline double sign(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline Vector sign(const Vector& v) { return v.unaryExpr([](double e) { return sign(e); }); }

}  // namespace swagger
