#pragma once

// Dense dictionary simplex for  max/min c^T x  s.t.  A x <= b,  x free.
//
// The tableau keeps only nonbasic columns (m x n instead of m x (n + m)). Free
// variables are pivoted into the basis first and never leave it; the remaining
// work is a textbook two-phase method over the slacks. Pricing is Dantzig's rule
// until a run of degenerate pivots is seen, after which Bland's rule takes over
// for the rest of the solve.

#include "scenvi/convex/polytope.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace scenvi {

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };
enum class Sense { maximize, minimize };

inline const char* to_string(LpStatus s) {
  switch (s) {
  case LpStatus::optimal: return "optimal";
  case LpStatus::infeasible: return "infeasible";
  case LpStatus::unbounded: return "unbounded";
  case LpStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

struct LpResult {
  LpStatus status = LpStatus::numerical_failure;
  Vector point;  // present iff optimal
  double value = std::numeric_limits<double>::quiet_NaN();
  int pivots = 0;

  bool optimal() const { return status == LpStatus::optimal; }
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-9;
  double cost_tol = 1e-10;
  int degenerate_switch = 30;  // consecutive degenerate pivots before Bland pricing
  int max_pivots = -1;         // -1: 50 (m + n) + 1000
};

namespace detail {

class DictionarySimplex {
public:
  // Variable ids: x_j -> j, slack of row i -> n + i, artificial -> n + m.
  DictionarySimplex(const Matrix& A, const Vector& b, const Vector& c, const LpOptions& opt)
      : n_(A.cols()), opt_(opt) {
    const Index m = A.rows();
    std::vector<Index> keep;
    keep.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      const double nrm = A.row(i).norm();
      if (nrm < 1e-14) {
        if (b[i] < -opt_.feas_tol) trivially_infeasible_ = true;
        continue;
      }
      keep.push_back(i);
    }
    m_ = static_cast<Index>(keep.size());
    aux_col_ = n_;
    rhs_col_ = n_ + 1;
    obj_row_ = m_;
    ph1_row_ = m_ + 1;
    T_ = Matrix::Zero(m_ + 2, n_ + 2);
    basic_.resize(static_cast<std::size_t>(m_));
    for (Index r = 0; r < m_; ++r) {
      const Index i = keep[static_cast<std::size_t>(r)];
      const double nrm = A.row(i).norm();
      T_.row(r).head(n_) = -A.row(i) / nrm;
      T_(r, rhs_col_) = b[i] / nrm;
      basic_[static_cast<std::size_t>(r)] = n_ + i;
    }
    T_.row(obj_row_).head(n_) = c.transpose();
    nonbasic_.resize(static_cast<std::size_t>(n_ + 1));
    for (Index j = 0; j < n_; ++j) nonbasic_[static_cast<std::size_t>(j)] = j;
    aux_id_ = n_ + A.rows();
    nonbasic_[static_cast<std::size_t>(n_)] = aux_id_;
    excluded_.assign(static_cast<std::size_t>(n_ + 1), false);
    excluded_[static_cast<std::size_t>(aux_col_)] = true;
    cost_tol_ = opt_.cost_tol * std::max(1.0, c.cwiseAbs().maxCoeff());
    max_pivots_ = opt_.max_pivots > 0 ? opt_.max_pivots
                                      : static_cast<int>(50 * (A.rows() + n_) + 1000);
  }

  LpResult run() {
    LpResult res;
    if (trivially_infeasible_) {
      res.status = LpStatus::infeasible;
      return res;
    }
    const bool start_feasible = restricted_feasible();
    enter_free_variables(start_feasible);
    if (failed_) return fail();

    if (!restricted_feasible()) {
      const auto st = phase_one();
      if (st) {
        res.status = *st;
        res.pivots = pivots_;
        return res;
      }
    }
    if (failed_) return fail();

    const LpStatus st2 = iterate(obj_row_);
    res.pivots = pivots_;
    if (st2 != LpStatus::optimal) {
      res.status = st2;
      return res;
    }
    // A free variable that could not enter the basis spans a lineality direction.
    for (Index col = 0; col < n_ + 1; ++col)
      if (stuck_[static_cast<std::size_t>(col)] && std::abs(T_(obj_row_, col)) > cost_tol_) {
        res.status = LpStatus::unbounded;
        return res;
      }

    res.point = Vector::Zero(n_);
    for (Index r = 0; r < m_; ++r) {
      const Index v = basic_[static_cast<std::size_t>(r)];
      if (v < n_) res.point[v] = T_(r, rhs_col_);
    }
    res.status = LpStatus::optimal;
    return res;
  }

private:
  bool is_free(Index var) const { return var < n_; }
  bool restricted_row(Index r) const { return !is_free(basic_[static_cast<std::size_t>(r)]); }

  bool restricted_feasible() const {
    for (Index r = 0; r < m_; ++r)
      if (restricted_row(r) && T_(r, rhs_col_) < -opt_.feas_tol) return false;
    return true;
  }

  LpResult fail() const {
    LpResult r;
    r.status = LpStatus::numerical_failure;
    r.pivots = pivots_;
    return r;
  }

  void pivot(Index r, Index e) {
    const double piv = T_(r, e);
    Eigen::RowVectorXd nr = -T_.row(r) / piv;
    nr(e) = 1.0 / piv;
    Vector col = T_.col(e);
    col(r) = 0.0;
    T_.col(e).setZero();
    T_.row(r) = nr;
    T_.noalias() += col * nr;
    std::swap(basic_[static_cast<std::size_t>(r)], nonbasic_[static_cast<std::size_t>(e)]);
    ++pivots_;
  }

  // Ratio test for column e moving in direction dir (+1/-1); -1 if no restricted row limits it.
  Index ratio_row(Index e, double dir, bool bland) const {
    Index best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index r = 0; r < m_; ++r) {
      if (!restricted_row(r)) continue;
      const double t = T_(r, e) * dir;
      if (t >= -opt_.pivot_tol) continue;
      const double ratio = std::max(T_(r, rhs_col_), 0.0) / -t;
      if (best < 0 || ratio < best_ratio - 1e-12) {
        best = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12) {
        const bool take = bland ? basic_[static_cast<std::size_t>(r)] < basic_[static_cast<std::size_t>(best)]
                                : std::abs(T_(r, e)) > std::abs(T_(best, e));
        if (take) {
          best = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    return best;
  }

  void enter_free_variables(bool keep_feasible) {
    stuck_.assign(static_cast<std::size_t>(n_ + 1), false);
    for (Index col = 0; col < n_; ++col) {
      // column `col` still holds x_col: free variables only leave the nonbasis here
      Index r = -1;
      if (keep_feasible) {
        const double d = T_(obj_row_, col);
        const double dir = d >= 0.0 ? 1.0 : -1.0;
        r = ratio_row(col, dir, false);
        if (r < 0) r = ratio_row(col, -dir, false);
      } else {
        double best = opt_.pivot_tol;
        for (Index rr = 0; rr < m_; ++rr) {
          if (!restricted_row(rr)) continue;
          if (std::abs(T_(rr, col)) > best) {
            best = std::abs(T_(rr, col));
            r = rr;
          }
        }
      }
      if (r < 0) {
        stuck_[static_cast<std::size_t>(col)] = true;
        excluded_[static_cast<std::size_t>(col)] = true;
        continue;
      }
      pivot(r, col);
    }
  }

  // Returns a terminal status if phase one decides the problem, nullopt to continue.
  std::optional<LpStatus> phase_one() {
    Index worst = -1;
    for (Index r = 0; r < m_; ++r) {
      if (!restricted_row(r)) continue;
      T_(r, aux_col_) = 1.0;
      if (worst < 0 || T_(r, rhs_col_) < T_(worst, rhs_col_)) worst = r;
    }
    T_(ph1_row_, aux_col_) = -1.0;
    excluded_[static_cast<std::size_t>(aux_col_)] = false;
    pivot(worst, aux_col_);
    const LpStatus st = iterate(ph1_row_);
    if (st != LpStatus::optimal) return LpStatus::numerical_failure;
    if (-T_(ph1_row_, rhs_col_) > opt_.feas_tol * 10.0) return LpStatus::infeasible;

    Index row = -1;
    for (Index r = 0; r < m_; ++r)
      if (basic_[static_cast<std::size_t>(r)] == aux_id_) row = r;
    if (row >= 0) {
      // artificial still basic at (near) zero: pivot it out degenerately
      Index best_col = -1;
      double best = opt_.pivot_tol;
      for (Index col = 0; col < n_ + 1; ++col) {
        if (stuck_[static_cast<std::size_t>(col)]) continue;
        if (std::abs(T_(row, col)) > best) {
          best = std::abs(T_(row, col));
          best_col = col;
        }
      }
      if (best_col >= 0) {
        pivot(row, best_col);
      } else {
        // identically-zero row; neutralize it
        T_.row(row).setZero();
      }
    }
    for (Index col = 0; col < n_ + 1; ++col)
      if (nonbasic_[static_cast<std::size_t>(col)] == aux_id_) {
        T_.col(col).setZero();
        excluded_[static_cast<std::size_t>(col)] = true;
      } else if (!stuck_[static_cast<std::size_t>(col)]) {
        excluded_[static_cast<std::size_t>(col)] = false;
      }
    return std::nullopt;
  }

  LpStatus iterate(Index objrow) {
    bool bland = false;
    int degenerate = 0;
    for (;;) {
      if (pivots_ > max_pivots_) {
        failed_ = true;
        return LpStatus::numerical_failure;
      }
      Index e = -1;
      double best = cost_tol_;
      for (Index col = 0; col < n_ + 1; ++col) {
        if (excluded_[static_cast<std::size_t>(col)]) continue;
        const double d = T_(objrow, col);
        if (d <= cost_tol_) continue;
        if (bland) {
          if (e < 0 || nonbasic_[static_cast<std::size_t>(col)] < nonbasic_[static_cast<std::size_t>(e)]) e = col;
        } else if (d > best) {
          best = d;
          e = col;
        }
      }
      if (e < 0) return LpStatus::optimal;
      const Index r = ratio_row(e, 1.0, bland);
      if (r < 0) return LpStatus::unbounded;
      if (T_(r, rhs_col_) <= 1e-12) {
        if (++degenerate >= opt_.degenerate_switch) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(r, e);
    }
  }

  Index n_ = 0;
  Index m_ = 0;
  LpOptions opt_;
  Matrix T_;
  std::vector<Index> basic_;
  std::vector<Index> nonbasic_;
  std::vector<bool> excluded_;
  std::vector<bool> stuck_;
  Index aux_col_ = 0, rhs_col_ = 0, obj_row_ = 0, ph1_row_ = 0;
  Index aux_id_ = 0;
  double cost_tol_ = 0.0;
  int pivots_ = 0;
  int max_pivots_ = 0;
  bool failed_ = false;
  bool trivially_infeasible_ = false;
};

} // namespace detail

/// Solves  max/min c^T x  s.t.  A x <= b.  When `start` is given and feasible the solver
/// skips phase one; an infeasible `start` is still handled correctly.
inline LpResult lp_solve(const Vector& c, const Matrix& A, const Vector& b, Sense sense,
                         const Vector* start = nullptr, const LpOptions& opt = {}) {
  require(c.size() == A.cols(), "lp_solve: objective has length " + std::to_string(c.size()) +
                                    ", constraint matrix has " + std::to_string(A.cols()) + " columns");
  require(A.rows() == b.size(), "lp_solve: A and b row counts differ");
  const double sign = sense == Sense::maximize ? 1.0 : -1.0;
  Vector shift = Vector::Zero(A.cols());
  if (start != nullptr) {
    require(start->size() == A.cols(), "lp_solve: start point has wrong length");
    shift = *start;
  }
  const Vector bs = b - A * shift;
  detail::DictionarySimplex simplex(A, bs, sign * c, opt);
  LpResult res = simplex.run();
  if (res.status != LpStatus::optimal) return res;
  res.point += shift;
  const double scale = 1.0 + (A.rows() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  if (A.rows() > 0 && (A * res.point - b).maxCoeff() > 1e-7 * scale) {
    res.status = LpStatus::numerical_failure;
    res.point.resize(0);
    return res;
  }
  res.value = c.dot(res.point);
  return res;
}

inline LpResult lp_solve(const Vector& c, const Polytope& P, Sense sense) {
  return lp_solve(c, P.A(), P.b(), sense);
}

} // namespace scenvi
