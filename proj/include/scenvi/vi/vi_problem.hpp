#pragma once

#include "scenvi/convex/geometry.hpp"
#include "scenvi/core/hash.hpp"
#include "scenvi/vi/affine_mapping.hpp"

#include <string>
#include <utility>

namespace scenvi {

/// VI(X, F) with X a nonempty bounded polytope and F affine.
class ViProblem {
public:
  ViProblem(AffineMapping F, Polytope X) : F_(std::move(F)), X_(std::move(X)) {
    require(F_.dim() == X_.dim(), "ViProblem: mapping has dimension " + std::to_string(F_.dim()) +
                                      ", polytope has " + std::to_string(X_.dim()) + " columns");
    require(X_.rows() > 0, "ViProblem: feasible set has no constraints (unbounded)");
    ball_ = chebyshev_center(X_);
    require(!ball_.empty(), "ViProblem: feasible set is empty");
    box_ = bounding_box(X_);
    lipschitz_ = lipschitz_upper_bound(F_);
  }

  const AffineMapping& mapping() const { return F_; }
  const Polytope& feasible() const { return X_; }
  Index dim() const { return F_.dim(); }

  double lipschitz() const { return lipschitz_; }
  const ChebyshevBall& chebyshev() const { return ball_; }
  const BoundingBox& box() const { return box_; }

  /// 0.9 / L, or 1 when F is constant.
  double default_step() const { return lipschitz_ > 1e-12 ? 0.9 / lipschitz_ : 1.0; }

  std::string hash() const {
    Fnv1a h;
    h.add(F_.M()).add(F_.q()).add(X_.A()).add(X_.b());
    return h.hex();
  }

private:
  AffineMapping F_;
  Polytope X_;
  ChebyshevBall ball_;
  BoundingBox box_;
  double lipschitz_ = 0.0;
};

} // namespace scenvi
