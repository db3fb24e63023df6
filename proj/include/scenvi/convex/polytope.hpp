#pragma once

#include "scenvi/core/types.hpp"

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scenvi {

/// Origin of a polytope row: a base constraint, or row `row` of sample `sample`'s block.
struct RowTag {
  enum class Kind { base, sample };

  Kind kind = Kind::base;
  int sample = -1;
  int row = 0;

  static RowTag base_row(int row) { return {Kind::base, -1, row}; }
  static RowTag sample_row(int sample, int row) { return {Kind::sample, sample, row}; }

  bool is_sample() const { return kind == Kind::sample; }
  friend bool operator==(const RowTag&, const RowTag&) = default;
};

/// Finite system of linear inequalities A x <= b with per-row provenance.
/// Emptiness of the described set is a queryable state, not a construction error.
class Polytope {
public:
  Polytope() = default;

  Polytope(Matrix A, Vector b, std::vector<RowTag> provenance)
      : A_(std::move(A)), b_(std::move(b)), tags_(std::move(provenance)) {
    require(A_.rows() == b_.size(), "Polytope: row count of A (" + std::to_string(A_.rows()) +
                                        ") differs from length of b (" + std::to_string(b_.size()) + ")");
    require(static_cast<Index>(tags_.size()) == A_.rows(),
            "Polytope: provenance must carry exactly one tag per row");
    require(A_.allFinite() && b_.allFinite(), "Polytope: non-finite coefficient");
  }

  /// All rows tagged as base rows 0..m-1.
  Polytope(Matrix A, Vector b) : Polytope(A, b, base_tags(A.rows())) {}

  static std::vector<RowTag> base_tags(Index m) {
    std::vector<RowTag> t;
    t.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) t.push_back(RowTag::base_row(static_cast<int>(i)));
    return t;
  }

  /// Axis-aligned box lo <= x <= hi, rows ordered (x_j <= hi_j, -x_j <= -lo_j) per coordinate.
  static Polytope box(const Vector& lo, const Vector& hi) {
    require(lo.size() == hi.size(), "Polytope::box: bound lengths differ");
    const Index n = lo.size();
    Matrix A = Matrix::Zero(2 * n, n);
    Vector b(2 * n);
    for (Index j = 0; j < n; ++j) {
      A(2 * j, j) = 1.0;
      b[2 * j] = hi[j];
      A(2 * j + 1, j) = -1.0;
      b[2 * j + 1] = -lo[j];
    }
    return {std::move(A), std::move(b)};
  }

  Index rows() const { return A_.rows(); }
  Index dim() const { return A_.cols(); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const std::vector<RowTag>& provenance() const { return tags_; }
  const RowTag& tag(Index i) const { return tags_[static_cast<std::size_t>(i)]; }

  Polytope subset(std::span<const Index> keep) const {
    Matrix A(static_cast<Index>(keep.size()), dim());
    Vector b(static_cast<Index>(keep.size()));
    std::vector<RowTag> t;
    t.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const Index i = keep[k];
      require(i >= 0 && i < rows(), "Polytope::subset: row index out of range");
      A.row(static_cast<Index>(k)) = A_.row(i);
      b[static_cast<Index>(k)] = b_[i];
      t.push_back(tags_[static_cast<std::size_t>(i)]);
    }
    return {std::move(A), std::move(b), std::move(t)};
  }

  /// Rows of *this followed by the given block.
  Polytope append(const Matrix& A, const Vector& b, std::span<const RowTag> tags) const {
    require(A.cols() == dim() || rows() == 0, "Polytope::append: column count mismatch");
    require(A.rows() == b.size() && static_cast<Index>(tags.size()) == A.rows(),
            "Polytope::append: block dimensions inconsistent");
    const Index n = rows() == 0 ? A.cols() : dim();
    Matrix As(rows() + A.rows(), n);
    Vector bs(rows() + A.rows());
    if (rows() > 0) {
      As.topRows(rows()) = A_;
      bs.head(rows()) = b_;
    }
    As.bottomRows(A.rows()) = A;
    bs.tail(A.rows()) = b;
    std::vector<RowTag> t = tags_;
    t.insert(t.end(), tags.begin(), tags.end());
    return {std::move(As), std::move(bs), std::move(t)};
  }

private:
  Matrix A_;
  Vector b_;
  std::vector<RowTag> tags_;
};

/// Largest row violation max_i (a_i^T x - b_i); negative when strictly inside.
inline double max_violation(const Polytope& P, const Vector& x) {
  require(x.size() == P.dim(), "max_violation: dimension mismatch");
  if (P.rows() == 0) return -std::numeric_limits<double>::infinity();
  return (P.A() * x - P.b()).maxCoeff();
}

/// True iff every row satisfies a_i^T x <= b_i + tol.
inline bool contains(const Polytope& P, const Vector& x, double tol) {
  require(x.size() == P.dim(), "contains: point has length " + std::to_string(x.size()) +
                                   ", polytope has " + std::to_string(P.dim()) + " columns");
  for (Index i = 0; i < P.rows(); ++i)
    if (P.A().row(i).dot(x) > P.b()[i] + tol) return false;
  return true;
}

} // namespace scenvi
