#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swagger/types.hpp"

namespace swagger {

enum class StructureKind { one_sparse, block_group, local_neighborhood, random, custom };

const char* to_string(StructureKind kind) noexcept;

/// Symmetric, hollow exclusivity matrix. Entry (i, j) is the strength with which
/// components i and j are discouraged from being nonzero together.
///
/// Builders always produce valid matrices. Matrices wrapped with `custom` are
/// stored as given and must pass `validate` before a penalty will accept them.
/// Storage is sparse so banded neighbourhood matrices stay cheap; `dense()`
/// materializes the full matrix for eigen-analysis.
class StructureMatrix {
 public:
  StructureMatrix() = default;

  static StructureMatrix custom(const Matrix& entries);
  /// Unchecked; the builders use this with mirrored triplets.
  static StructureMatrix from_sparse(SparseMatrix entries, StructureKind kind = StructureKind::custom);

  Index dim() const noexcept { return entries_.rows(); }
  StructureKind kind() const noexcept { return kind_; }
  const SparseMatrix& sparse() const noexcept { return entries_; }
  Matrix dense() const { return Matrix(entries_); }
  double operator()(Index i, Index j) const { return entries_.coeff(i, j); }

  /// S * v.
  Vector apply(const Vector& v) const { return entries_ * v; }

  /// True when every off-diagonal entry is exactly one, i.e. S = 11^T - I.
  bool overlap_free() const noexcept { return overlap_free_; }

  /// Upper bound on the spectral radius (largest absolute row sum).
  double row_sum_bound() const noexcept { return row_bound_; }

  friend bool operator==(const StructureMatrix& a, const StructureMatrix& b);

 private:
  StructureMatrix(SparseMatrix entries, StructureKind kind);

  SparseMatrix entries_;
  StructureKind kind_ = StructureKind::custom;
  bool overlap_free_ = false;
  double row_bound_ = 0.0;
};

/// Elementwise nonlinearity applied before the quadratic form.
class Nonlinearity {
 public:
  enum class Family { abs, rect_pos, rect_neg, power };

  /// Floor applied to |u| inside |u|^(kappa-1) so power-family derivatives stay finite.
  static constexpr double kPowerFloor = 1e-12;

  static Nonlinearity abs() { return Nonlinearity(Family::abs, 1.0); }
  static Nonlinearity rect_pos() { return Nonlinearity(Family::rect_pos, 1.0); }
  static Nonlinearity rect_neg() { return Nonlinearity(Family::rect_neg, 1.0); }
  static Nonlinearity power(double kappa);

  Family family() const noexcept { return family_; }
  double kappa() const noexcept { return kappa_; }

  /// abs, or power with kappa == 1.
  bool is_abs() const noexcept { return family_ == Family::abs || (family_ == Family::power && kappa_ == 1.0); }

  double operator()(double u) const;
  Vector apply(const Vector& u) const;

  /// d phi / du with the sign(0) = 0 convention.
  double derivative(double u) const;
  Vector derivative(const Vector& u) const;

  std::string name() const;

 private:
  Nonlinearity(Family family, double kappa) : family_(family), kappa_(kappa) {}

  Family family_ = Family::abs;
  double kappa_ = 1.0;
};

/// Weights on the band of a local-neighbourhood matrix, indexed by offset |i - j|.
struct BandWeights {
  double near = 1.0;
  double far = 1.0;

  static BandWeights constant(double mu) { return {mu, mu}; }
  /// Linear in the offset: `near` at offset 1, `far` at offset n.
  static BandWeights ramp(double near, double far) { return {near, far}; }

  double at(Index offset, Index n) const;
};

StructureMatrix build_one_sparse(Index dim);
StructureMatrix build_block_group(Index num_groups, Index group_size);
StructureMatrix build_local_neighborhood(Index dim, Index n, BandWeights weights = BandWeights::constant(1.0));

/// Block-diagonal stack of `strips` local-neighbourhood matrices, each of size
/// `strip_len`; bands never couple indices across strip boundaries.
StructureMatrix build_local_neighborhood_strips(Index strips, Index strip_len, Index n,
                                                BandWeights weights = BandWeights::constant(1.0));

StructureMatrix build_random(Index dim, double density, std::uint64_t seed);

struct Violation {
  enum class Kind { empty, non_finite, asymmetric, nonzero_diagonal, negative_entry, entry_above_one, nonlinearity };
  Kind kind;
  Index row = -1;
  Index col = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate(const StructureMatrix& s, const Nonlinearity& phi = Nonlinearity::abs());

/// Plain-text format: first line M, then M whitespace-separated rows.
void write_structure(std::ostream& out, const StructureMatrix& s);
/// Rejects malformed, asymmetric or out-of-range input.
StructureMatrix read_structure(std::istream& in);

}  // namespace swagger
