#pragma once

// Euclidean projection onto {x : A x <= b, E x = e} by the Goldfarb-Idnani dual
// active-set method specialised to an identity Hessian. The dual iterate starts at
// the unconstrained minimiser z and adds the most violated row each outer step, so
// the cost is driven by the size of the final active set rather than by m.

#include "scenvi/convex/polytope.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace scenvi {

enum class ProjectionStatus { ok, infeasible, failed };

struct ProjectionResult {
  ProjectionStatus status = ProjectionStatus::failed;
  Vector point;
  std::vector<Index> active;  // inequality rows in the final active set
  Vector multipliers;         // one per entry of `active`, for the caller's row scaling
  double kkt_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;

  bool ok() const { return status == ProjectionStatus::ok; }
};

struct ProjectionOptions {
  double feas_tol = 1e-12;  // relative violation threshold for adding a row
  double kkt_tol = 1e-9;    // relative acceptance threshold on the final KKT residual
  int max_iter = -1;        // -1: 20 (m + n) + 100
};

namespace detail {

class DualActiveSet {
public:
  DualActiveSet(const Matrix& A, const Vector& b, const Matrix& E, const Vector& e, const Vector& z,
                const ProjectionOptions& opt)
      : n_(z.size()), z_(z), opt_(opt) {
    const Index m = A.rows();
    An_.resize(m, n_);
    bn_.resize(m);
    scale_.resize(m);
    for (Index i = 0; i < m; ++i) {
      const double nrm = A.row(i).norm();
      scale_[i] = nrm;
      if (nrm < 1e-14) {
        An_.row(i).setZero();
        bn_[i] = b[i] < 0.0 ? -1.0 : 1.0;  // a violated zero row makes the set empty
        continue;
      }
      An_.row(i) = A.row(i) / nrm;
      bn_[i] = b[i] / nrm;
    }
    En_.resize(E.rows(), n_);
    en_.resize(E.rows());
    for (Index k = 0; k < E.rows(); ++k) {
      const double nrm = E.row(k).norm();
      require(nrm > 1e-14, "project_onto: zero equality row");
      En_.row(k) = E.row(k) / nrm;
      en_[k] = e[k] / nrm;
    }
    tol_ = opt_.feas_tol * (1.0 + z.cwiseAbs().maxCoeff() + (m > 0 ? bn_.cwiseAbs().maxCoeff() : 0.0));
    max_iter_ = opt_.max_iter > 0 ? opt_.max_iter : static_cast<int>(20 * (m + E.rows() + n_) + 100);
  }

  ProjectionResult run() {
    ProjectionResult res;
    for (Index i = 0; i < An_.rows(); ++i)
      if (scale_[i] < 1e-14 && bn_[i] < 0.0) {
        res.status = ProjectionStatus::infeasible;
        return res;
      }

    x_ = z_;
    J_ = Matrix::Identity(n_, n_);
    R_ = Matrix::Zero(n_, n_);
    act_.assign(static_cast<std::size_t>(n_ + 1), kNone);
    u_ = Vector::Zero(n_ + 1);
    iq_ = 0;
    r_norm_ = 1.0;
    const Index meq = En_.rows();
    if (meq > n_) return failed(res);

    for (Index k = 0; k < meq; ++k) {
      const Vector np = En_.row(k).transpose();
      d_.noalias() = J_.transpose() * np;
      update_z();
      update_r();
      double t2 = 0.0;
      const double zn = zdir_.dot(np);
      if (zdir_.squaredNorm() > 1e-28) t2 = (en_[k] - np.dot(x_)) / zn;
      x_ += t2 * zdir_;
      u_[iq_] = t2;
      u_.head(iq_) -= t2 * r_.head(iq_);
      act_[static_cast<std::size_t>(iq_)] = -(k + 1);
      if (!add_constraint()) {
        // dependent equality: consistent iff it is already satisfied
        if (std::abs(np.dot(x_) - en_[k]) > 1e3 * tol_) {
          res.status = ProjectionStatus::infeasible;
          return res;
        }
      }
    }
    for (Index k = 0; k < meq; ++k)
      if (std::abs(En_.row(k).dot(x_) - en_[k]) > 1e3 * tol_) {
        res.status = ProjectionStatus::infeasible;
        return res;
      }

    std::vector<char> in_active(static_cast<std::size_t>(An_.rows()), 0);
    int iter = 0;
    for (;;) {
      if (++iter > max_iter_) return failed(res, iter);
      // most violated inactive row
      Index ip = -1;
      double smin = -tol_;
      if (An_.rows() > 0) {
        const Vector s = bn_ - An_ * x_;
        for (Index i = 0; i < An_.rows(); ++i)
          if (!in_active[static_cast<std::size_t>(i)] && s[i] < smin) {
            smin = s[i];
            ip = i;
          }
      }
      if (ip < 0) break;

      const Vector np = -An_.row(ip).transpose();
      double s_ip = smin;
      u_[iq_] = 0.0;
      act_[static_cast<std::size_t>(iq_)] = ip;

      for (;;) {
        if (++iter > max_iter_) return failed(res, iter);
        d_.noalias() = J_.transpose() * np;
        update_z();
        update_r();
        // partial (dual) step length
        Index l = -1;
        double t1 = std::numeric_limits<double>::infinity();
        for (Index k = meq; k < iq_; ++k)
          if (r_[k] > 0.0 && u_[k] / r_[k] < t1) {
            t1 = u_[k] / r_[k];
            l = k;
          }
        // full (primal) step length
        double t2 = std::numeric_limits<double>::infinity();
        if (zdir_.squaredNorm() > 1e-28) t2 = -s_ip / zdir_.dot(np);
        const double t = std::min(t1, t2);
        if (!std::isfinite(t)) {
          res.status = ProjectionStatus::infeasible;
          res.iterations = iter;
          return res;
        }
        if (!std::isfinite(t2)) {
          u_.head(iq_) -= t * r_.head(iq_);
          u_[iq_] += t;
          drop(l, in_active);
          continue;
        }
        x_ += t * zdir_;
        u_.head(iq_) -= t * r_.head(iq_);
        u_[iq_] += t;
        if (t2 <= t1) {
          if (!add_constraint()) return failed(res, iter);
          in_active[static_cast<std::size_t>(ip)] = 1;
          break;
        }
        drop(l, in_active);
        s_ip = bn_[ip] - An_.row(ip).dot(x_);
      }
    }

    res.iterations = iter;
    res.point = x_;
    Vector grad = z_ - x_;  // must equal sum_k u_k a_k over active rows
    for (Index k = 0; k < iq_; ++k) {
      const Index c = act_[static_cast<std::size_t>(k)];
      if (c >= 0) {
        grad -= u_[k] * An_.row(c).transpose();
        res.active.push_back(c);
      } else {
        grad += u_[k] * En_.row(-c - 1).transpose();
      }
    }
    res.multipliers.resize(static_cast<Index>(res.active.size()));
    Index pos = 0;
    for (Index k = 0; k < iq_; ++k) {
      const Index c = act_[static_cast<std::size_t>(k)];
      if (c >= 0) res.multipliers[pos++] = u_[k] / scale_[c];
    }
    double viol = 0.0;
    if (An_.rows() > 0) viol = std::max(0.0, (An_ * x_ - bn_).maxCoeff());
    for (Index k = 0; k < meq; ++k) viol = std::max(viol, std::abs(En_.row(k).dot(x_) - en_[k]));
    res.kkt_residual = std::max(grad.norm(), viol);
    const double accept = opt_.kkt_tol * (1.0 + (z_ - x_).norm() + x_.cwiseAbs().maxCoeff());
    res.status = res.kkt_residual <= accept ? ProjectionStatus::ok : ProjectionStatus::failed;
    return res;
  }

private:
  static constexpr Index kNone = std::numeric_limits<Index>::min();

  ProjectionResult& failed(ProjectionResult& res, int iter = 0) {
    res.status = ProjectionStatus::failed;
    res.iterations = iter;
    return res;
  }

  void update_z() { zdir_.noalias() = J_.rightCols(n_ - iq_) * d_.tail(n_ - iq_); }

  void update_r() {
    r_.resize(n_ + 1);
    for (Index i = iq_ - 1; i >= 0; --i) {
      double sum = d_[i];
      for (Index j = i + 1; j < iq_; ++j) sum -= R_(i, j) * r_[j];
      r_[i] = sum / R_(i, i);
    }
  }

  // Givens-rotates d so that only its first iq+1 entries are nonzero, mirroring the rotations in J.
  bool add_constraint() {
    for (Index j = n_ - 1; j >= iq_ + 1; --j) {
      double cc = d_[j - 1];
      double ss = d_[j];
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      d_[j] = 0.0;
      ss /= h;
      cc /= h;
      if (cc < 0.0) {
        cc = -cc;
        ss = -ss;
        d_[j - 1] = -h;
      } else {
        d_[j - 1] = h;
      }
      const double xny = ss / (1.0 + cc);
      for (Index k = 0; k < n_; ++k) {
        const double t1 = J_(k, j - 1);
        const double t2 = J_(k, j);
        J_(k, j - 1) = t1 * cc + t2 * ss;
        J_(k, j) = xny * (t1 + J_(k, j - 1)) - t2;
      }
    }
    if (std::abs(d_[iq_]) <= 1e-14 * r_norm_) return false;
    ++iq_;
    for (Index i = 0; i < iq_; ++i) R_(i, iq_ - 1) = d_[i];
    r_norm_ = std::max(r_norm_, std::abs(d_[iq_ - 1]));
    return true;
  }

  // Removes active position l (an inequality) and restores the triangular factor.
  void drop(Index l, std::vector<char>& in_active) {
    in_active[static_cast<std::size_t>(act_[static_cast<std::size_t>(l)])] = 0;
    for (Index i = l; i < iq_ - 1; ++i) {
      act_[static_cast<std::size_t>(i)] = act_[static_cast<std::size_t>(i + 1)];
      u_[i] = u_[i + 1];
      for (Index j = 0; j < n_; ++j) R_(j, i) = R_(j, i + 1);
    }
    act_[static_cast<std::size_t>(iq_ - 1)] = act_[static_cast<std::size_t>(iq_)];
    u_[iq_ - 1] = u_[iq_];
    act_[static_cast<std::size_t>(iq_)] = kNone;
    u_[iq_] = 0.0;
    for (Index j = 0; j < iq_; ++j) R_(j, iq_ - 1) = 0.0;
    --iq_;
    if (iq_ == 0) return;
    for (Index j = l; j < iq_; ++j) {
      double cc = R_(j, j);
      double ss = R_(j + 1, j);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      cc /= h;
      ss /= h;
      R_(j + 1, j) = 0.0;
      if (cc < 0.0) {
        R_(j, j) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        R_(j, j) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (Index k = j + 1; k < iq_; ++k) {
        const double t1 = R_(j, k);
        const double t2 = R_(j + 1, k);
        R_(j, k) = t1 * cc + t2 * ss;
        R_(j + 1, k) = xny * (t1 + R_(j, k)) - t2;
      }
      for (Index k = 0; k < n_; ++k) {
        const double t1 = J_(k, j);
        const double t2 = J_(k, j + 1);
        J_(k, j) = t1 * cc + t2 * ss;
        J_(k, j + 1) = xny * (J_(k, j) + t1) - t2;
      }
    }
  }

  Index n_;
  Vector z_;
  ProjectionOptions opt_;
  Matrix An_, En_;
  Vector bn_, en_, scale_;
  double tol_ = 0.0;
  int max_iter_ = 0;

  Vector x_, d_, zdir_, r_, u_;
  Matrix J_, R_;
  std::vector<Index> act_;
  Index iq_ = 0;
  double r_norm_ = 1.0;
};

} // namespace detail

/// Projection onto {A x <= b} intersected with the affine slice {E x = e} (E may have zero rows).
/// Reports emptiness and numerical failure through the status instead of throwing.
inline ProjectionResult project(const Matrix& A, const Vector& b, const Matrix& E, const Vector& e,
                                const Vector& z, const ProjectionOptions& opt = {}) {
  require(A.rows() == b.size() && E.rows() == e.size(), "project: row counts of matrix and rhs differ");
  require(A.cols() == z.size() && (E.rows() == 0 || E.cols() == z.size()),
          "project: point has length " + std::to_string(z.size()) + ", constraints have " +
              std::to_string(A.cols()) + " columns");
  detail::DualActiveSet solver(A, b, E.rows() == 0 ? Matrix(0, z.size()) : E, e, z, opt);
  return solver.run();
}

inline ProjectionResult project(const Polytope& P, const Vector& z, const ProjectionOptions& opt = {}) {
  return project(P.A(), P.b(), Matrix(0, P.dim()), Vector(0), z, opt);
}

/// Euclidean projection of z onto P. Throws ContractError on an empty P and
/// NumericalFailure when the active-set iteration does not certify its KKT point.
inline Vector project_onto(const Polytope& P, const Vector& z) {
  const ProjectionResult r = project(P, z);
  if (r.status == ProjectionStatus::infeasible) throw ContractError("project_onto: polytope is empty");
  if (r.status == ProjectionStatus::failed)
    throw NumericalFailure("project_onto: active-set iteration failed (KKT residual " +
                           std::to_string(r.kkt_residual) + ")");
  return r.point;
}

} // namespace scenvi
