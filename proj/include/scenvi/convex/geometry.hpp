#pragma once

#include "scenvi/convex/lp.hpp"

#include <string>

namespace scenvi {

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;  // < 0: empty polytope; == 0: empty interior

  bool empty() const { return radius < 0.0; }
};

/// Largest inscribed ball via one LP over (x, r):  max r  s.t.  a_i^T x + ||a_i|| r <= b_i.
/// Throws ContractError when the LP is unbounded (the polytope needs box bounds).
inline ChebyshevBall chebyshev_center(const Polytope& P) {
  require(P.rows() > 0, "chebyshev_center: polytope has no rows");
  const Index n = P.dim();
  const Index m = P.rows();
  Matrix A(m, n + 1);
  A.leftCols(n) = P.A();
  double rmin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i) {
    const double nrm = P.A().row(i).norm();
    A(i, n) = nrm;
    if (nrm > 1e-14) {
      rmin = std::min(rmin, P.b()[i] / nrm);
    } else if (P.b()[i] < 0.0) {
      return {Vector::Zero(n), -1.0};
    }
  }
  if (!std::isfinite(rmin)) rmin = 0.0;
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  // (0, rmin - 1) is feasible, so no phase one is needed
  Vector start = Vector::Zero(n + 1);
  start[n] = rmin - 1.0;
  const LpResult r = lp_solve(c, A, P.b(), Sense::maximize, &start);
  if (r.status == LpStatus::unbounded)
    throw ContractError("chebyshev_center: polytope is unbounded; add explicit box bounds");
  if (r.status != LpStatus::optimal)
    throw NumericalFailure(std::string("chebyshev_center: LP ended with status ") + to_string(r.status));
  double radius = r.point[n];
  if (std::abs(radius) < 1e-12) radius = 0.0;
  return {r.point.head(n), radius};
}

struct BoundingBox {
  Vector lo;
  Vector hi;

  double diameter() const { return (hi - lo).norm(); }
};

/// Coordinate-wise extent of a nonempty polytope via 2n LPs; ContractError if any
/// coordinate is unbounded or the polytope is empty.
inline BoundingBox bounding_box(const Polytope& P) {
  const Index n = P.dim();
  BoundingBox box{Vector(n), Vector(n)};
  for (Index j = 0; j < n; ++j) {
    Vector c = Vector::Zero(n);
    c[j] = 1.0;
    for (const Sense s : {Sense::maximize, Sense::minimize}) {
      const LpResult r = lp_solve(c, P, s);
      if (r.status == LpStatus::infeasible) throw ContractError("bounding_box: polytope is empty");
      if (r.status == LpStatus::unbounded)
        throw ContractError("polytope is unbounded along coordinate " + std::to_string(j) +
                            "; add explicit box bounds");
      if (r.status != LpStatus::optimal) throw NumericalFailure("bounding_box: LP failed");
      (s == Sense::maximize ? box.hi : box.lo)[j] = r.value;
    }
  }
  return box;
}

inline bool is_bounded(const Polytope& P) {
  for (Index j = 0; j < P.dim(); ++j) {
    Vector c = Vector::Zero(P.dim());
    c[j] = 1.0;
    for (const Sense s : {Sense::maximize, Sense::minimize})
      if (lp_solve(c, P, s).status == LpStatus::unbounded) return false;
  }
  return true;
}

} // namespace scenvi
