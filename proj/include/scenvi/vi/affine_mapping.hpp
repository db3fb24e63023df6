#pragma once

#include "scenvi/core/random.hpp"
#include "scenvi/core/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

namespace scenvi {

/// F(x) = M x + q.
class AffineMapping {
public:
  AffineMapping() = default;
  AffineMapping(Matrix M, Vector q) : M_(std::move(M)), q_(std::move(q)) {
    require(M_.rows() == M_.cols(), "AffineMapping: M must be square");
    require(M_.rows() == q_.size(), "AffineMapping: q has length " + std::to_string(q_.size()) +
                                        ", M is " + std::to_string(M_.rows()) + "x" + std::to_string(M_.cols()));
  }

  Index dim() const { return q_.size(); }
  const Matrix& M() const { return M_; }
  const Vector& q() const { return q_; }

  Vector evaluate(const Vector& x) const {
    require(x.size() == dim(), "AffineMapping::evaluate: dimension mismatch");
    return M_ * x + q_;
  }
  Vector operator()(const Vector& x) const { return evaluate(x); }

private:
  Matrix M_;
  Vector q_;
};

inline Vector evaluate(const AffineMapping& F, const Vector& x) { return F.evaluate(x); }

enum class Monotonicity { strongly_monotone, monotone, indefinite };

inline const char* to_string(Monotonicity m) {
  switch (m) {
  case Monotonicity::strongly_monotone: return "strongly_monotone";
  case Monotonicity::monotone: return "monotone";
  case Monotonicity::indefinite: return "indefinite";
  }
  return "?";
}

struct MonotonicityClass {
  Monotonicity kind = Monotonicity::indefinite;
  double lambda_min = 0.0;  // smallest eigenvalue of (M + M^T)/2; the modulus when strongly monotone
};

/// Classifies F by the spectrum of the symmetric part of M. An indefinite map may still be
/// pseudomonotone; that cannot be decided here and remains the caller's responsibility.
inline MonotonicityClass monotonicity_classify(const AffineMapping& F, double tol_eig = 1e-10) {
  if (F.dim() == 0) return {Monotonicity::monotone, 0.0};
  const Matrix S = 0.5 * (F.M() + F.M().transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double tol = tol_eig * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (lmin > tol) return {Monotonicity::strongly_monotone, lmin};
  if (lmin >= -tol) return {Monotonicity::monotone, lmin};
  return {Monotonicity::indefinite, lmin};
}

/// Upper bound on ||M||_2: power iteration on M^T M, inflated by a relative 1e-6.
inline double lipschitz_upper_bound(const AffineMapping& F) {
  const Index n = F.dim();
  if (n == 0 || F.M().cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Rng rng(0x5eed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * rng.uniform();
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 20000; ++it) {
    const Vector Mv = F.M() * v;
    const double next = Mv.norm();
    Vector w = F.M().transpose() * Mv;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    const bool done = it > 0 && std::abs(next - sigma) <= 1e-12 * next;
    sigma = next;
    if (done) break;
  }
  sigma = std::max(sigma, (F.M() * v).norm());
  return sigma * (1.0 + 1e-6);
}

} // namespace scenvi
