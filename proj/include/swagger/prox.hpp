#pragma once

#include <vector>

#include "swagger/types.hpp"

namespace swagger {

/// Support size rho and threshold tau chosen by the l1^2 sort-and-threshold rule.
struct L1SqThreshold {
  Index rho = 0;
  double tau = 0.0;
};

L1SqThreshold l1sq_threshold(const Vector& z, double lambda);

/// argmin_q 1/2 ||z - q||^2 + lambda/2 ||q||_1^2, in O(N log N).
Vector prox_l1sq(const Vector& z, double lambda);

/// Elementwise max(|z| - lambda, 0) sign(z).
Vector soft_threshold(const Vector& z, double lambda);

/// Elementwise max(|z| - lambda^(2-p) |z|^(p-1), 0) sign(z); p = 1 is soft thresholding.
Vector p_shrink(const Vector& z, double lambda, double p);

using Groups = std::vector<std::vector<Index>>;

/// Blockwise prox_l1sq over pairwise-disjoint groups; indices outside every
/// group pass through. Overlapping groups have no exact prox here and raise
/// not-separable.
Vector prox_elasso(const Vector& z, const Groups& groups, double lambda);

/// True when no index appears in more than one group.
bool groups_disjoint(const Groups& groups);

}  // namespace swagger
