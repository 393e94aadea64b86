#include "swagger/structure.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "swagger/error.hpp"

namespace swagger {

const char* to_string(StructureKind kind) noexcept {
  switch (kind) {
    case StructureKind::one_sparse: return "one-sparse";
    case StructureKind::block_group: return "block-group";
    case StructureKind::local_neighborhood: return "local-neighborhood";
    case StructureKind::random: return "random";
    case StructureKind::custom: return "custom";
  }
  return "unknown";
}

namespace {

using Triplet = Eigen::Triplet<double>;

// Adds the pair (i, j) and its mirror with one value so symmetry is exact.
void mirror(std::vector<Triplet>& out, Index i, Index j, double value) {
  out.emplace_back(i, j, value);
  out.emplace_back(j, i, value);
}

SparseMatrix from_triplets(Index dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

void require_positive(Index value, const char* what) {
  if (value < 1) throw Error(Errc::invalid_dimension, std::string(what) + " must be >= 1");
}

void require_weight(double w) {
  if (!(w > 0.0 && w <= 1.0)) {
    throw Error(Errc::invalid_weight, "band weight " + std::to_string(w) + " outside (0, 1]");
  }
}

}  // namespace

StructureMatrix::StructureMatrix(SparseMatrix entries, StructureKind kind)
    : entries_(std::move(entries)), kind_(kind) {
  const Index m = entries_.rows();
  // Off-diagonal count of exact ones, to detect S = 11^T - I.
  Index ones = 0;
  bool other = false;
  Vector row_abs = Vector::Zero(m);
  for (Index k = 0; k < entries_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(entries_, k); it; ++it) {
      row_abs(it.row()) += std::abs(it.value());
      if (it.row() == it.col()) {
        if (it.value() != 0.0) other = true;
      } else if (it.value() == 1.0) {
        ++ones;
      } else if (it.value() != 0.0) {
        other = true;
      }
    }
  }
  overlap_free_ = !other && ones == m * (m - 1);
  row_bound_ = m > 0 ? row_abs.maxCoeff() : 0.0;
}

StructureMatrix StructureMatrix::custom(const Matrix& entries) {
  if (entries.rows() != entries.cols()) {
    throw Error(Errc::shape, "structure matrix must be square");
  }
  return StructureMatrix(entries.sparseView(0.0, 0.0), StructureKind::custom);
}

StructureMatrix StructureMatrix::from_sparse(SparseMatrix entries, StructureKind kind) {
  return StructureMatrix(std::move(entries), kind);
}

bool operator==(const StructureMatrix& a, const StructureMatrix& b) {
  if (a.dim() != b.dim()) return false;
  return (a.entries_ - b.entries_).norm() == 0.0;
}

Nonlinearity Nonlinearity::power(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw Error(Errc::range, "power nonlinearity needs kappa > 0");
  }
  return Nonlinearity(Family::power, kappa);
}

double Nonlinearity::operator()(double u) const {
  switch (family_) {
    case Family::abs: return std::abs(u);
    case Family::rect_pos: return u > 0.0 ? u : 0.0;
    case Family::rect_neg: return u < 0.0 ? -u : 0.0;
    case Family::power: return kappa_ == 1.0 ? std::abs(u) : std::pow(std::abs(u), kappa_);
  }
  return 0.0;
}

Vector Nonlinearity::apply(const Vector& u) const {
  return u.unaryExpr([this](double v) { return (*this)(v); });
}

double Nonlinearity::derivative(double u) const {
  switch (family_) {
    case Family::abs: return sign(u);
    case Family::rect_pos: return u > 0.0 ? 1.0 : 0.0;
    case Family::rect_neg: return u < 0.0 ? -1.0 : 0.0;
    case Family::power:
      if (kappa_ == 1.0) return sign(u);
      return kappa_ * std::pow(std::max(std::abs(u), kPowerFloor), kappa_ - 1.0) * sign(u);
  }
  return 0.0;
}

Vector Nonlinearity::derivative(const Vector& u) const {
  return u.unaryExpr([this](double v) { return derivative(v); });
}

std::string Nonlinearity::name() const {
  switch (family_) {
    case Family::abs: return "abs";
    case Family::rect_pos: return "rect-pos";
    case Family::rect_neg: return "rect-neg";
    case Family::power: {
      std::ostringstream os;
      os << "power(" << kappa_ << ")";
      return os.str();
    }
  }
  return "unknown";
}

double BandWeights::at(Index offset, Index n) const {
  if (n <= 1) return near;
  const double t = static_cast<double>(offset - 1) / static_cast<double>(n - 1);
  return near + (far - near) * t;
}

StructureMatrix build_one_sparse(Index dim) {
  require_positive(dim, "dim");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim * (dim - 1)));
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) mirror(t, i, j, 1.0);
  }
  return StructureMatrix::from_sparse(from_triplets(dim, t), StructureKind::one_sparse);
}

StructureMatrix build_block_group(Index num_groups, Index group_size) {
  require_positive(num_groups, "num_groups");
  require_positive(group_size, "group_size");
  const Index dim = num_groups * group_size;
  std::vector<Triplet> t;
  for (Index g = 0; g < num_groups; ++g) {
    const Index base = g * group_size;
    for (Index i = 0; i < group_size; ++i) {
      for (Index j = i + 1; j < group_size; ++j) mirror(t, base + i, base + j, 1.0);
    }
  }
  // A single group is the canonical one-sparse matrix.
  const auto kind = num_groups == 1 ? StructureKind::one_sparse : StructureKind::block_group;
  return StructureMatrix::from_sparse(from_triplets(dim, t), kind);
}

StructureMatrix build_local_neighborhood_strips(Index strips, Index strip_len, Index n, BandWeights weights) {
  require_positive(strips, "strips");
  require_positive(strip_len, "dim");
  if (n < 1 || n >= strip_len) {
    throw Error(Errc::invalid_band, "band width n=" + std::to_string(n) + " must satisfy 1 <= n < " +
                                        std::to_string(strip_len));
  }
  require_weight(weights.near);
  require_weight(weights.far);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * strips * strip_len * n));
  for (Index s = 0; s < strips; ++s) {
    const Index base = s * strip_len;
    for (Index i = 0; i < strip_len; ++i) {
      for (Index off = 1; off <= n && i + off < strip_len; ++off) {
        mirror(t, base + i, base + i + off, weights.at(off, n));
      }
    }
  }
  return StructureMatrix::from_sparse(from_triplets(strips * strip_len, t), StructureKind::local_neighborhood);
}

StructureMatrix build_local_neighborhood(Index dim, Index n, BandWeights weights) {
  return build_local_neighborhood_strips(1, dim, n, weights);
}

StructureMatrix build_random(Index dim, double density, std::uint64_t seed) {
  require_positive(dim, "dim");
  if (!(density > 0.0 && density < 1.0)) {
    throw Error(Errc::invalid_probability, "density must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<Triplet> t;
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) {
      if (coin(rng)) mirror(t, i, j, 1.0);
    }
  }
  return StructureMatrix::from_sparse(from_triplets(dim, t), StructureKind::random);
}

bool ValidationReport::has(Violation::Kind kind) const {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) os << "; ";
    os << violations[k].message;
  }
  return os.str();
}

ValidationReport validate(const StructureMatrix& s, const Nonlinearity& phi) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, Index i, Index j, std::string msg) {
    report.violations.push_back({kind, i, j, std::move(msg)});
  };
  auto where = [](Index i, Index j) { return " at (" + std::to_string(i) + ", " + std::to_string(j) + ")"; };

  if (s.dim() == 0) add(Violation::Kind::empty, -1, -1, "empty matrix");

  const SparseMatrix& m = s.sparse();
  const SparseMatrix mt = m.transpose();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const Index i = it.row();
      const Index j = it.col();
      const double v = it.value();
      if (!std::isfinite(v)) {
        add(Violation::Kind::non_finite, i, j, "non-finite entry" + where(i, j));
        continue;
      }
      if (i == j && v != 0.0) add(Violation::Kind::nonzero_diagonal, i, j, "nonzero diagonal" + where(i, j));
      if (v < 0.0) add(Violation::Kind::negative_entry, i, j, "negative entry" + where(i, j));
      if (v > 1.0) add(Violation::Kind::entry_above_one, i, j, "entry above one" + where(i, j));
      if (i < j && v != mt.coeff(i, j)) add(Violation::Kind::asymmetric, i, j, "asymmetric entry" + where(i, j));
    }
  }
  // Entries present only below the diagonal are missed by the i < j check above.
  for (Index k = 0; k < mt.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(mt, k); it; ++it) {
      const Index i = it.row();
      const Index j = it.col();
      if (i < j && m.coeff(i, j) == 0.0 && it.value() != 0.0) {
        add(Violation::Kind::asymmetric, i, j, "asymmetric entry" + where(i, j));
      }
    }
  }
  // Every supported family maps into [0, inf); power needs kappa > 0, enforced at construction.
  if (phi.family() == Nonlinearity::Family::power && !(phi.kappa() > 0.0)) {
    add(Violation::Kind::nonlinearity, -1, -1, "nonlinearity may be negative");
  }
  return report;
}

void write_structure(std::ostream& out, const StructureMatrix& s) {
  const Matrix d = s.dense();
  out << d.rows() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) {
      if (j) out << ' ';
      out << d(i, j);
    }
    out << '\n';
  }
}

StructureMatrix read_structure(std::istream& in) {
  long long m = 0;
  if (!(in >> m) || m < 1) throw Error(Errc::io, "structure file: missing or invalid dimension line");
  Matrix d(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (!(in >> d(i, j))) {
        throw Error(Errc::io, "structure file: expected " + std::to_string(m * m) + " entries");
      }
    }
  }
  std::string extra;
  if (in >> extra) throw Error(Errc::io, "structure file: trailing data '" + extra + "'");
  auto s = StructureMatrix::custom(d);
  const auto report = validate(s);
  if (!report.ok()) throw Error(Errc::invalid_structure, report.summary());
  return s;
}

}  // namespace swagger
