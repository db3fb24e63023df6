#pragma once

#include "scenvi/scenario/program.hpp"
#include "scenvi/vi/extragradient.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scenvi {

/// Finite deduplicated sample of verified solutions of one ViProblem.
struct SolutionCloud {
  std::vector<Vector> points;
  double dedupe_radius = 1e-4;
  std::string problem_hash;
  int restarts = 0;
  int verified = 0;  // restarts whose limit passed is_solution, before dedup

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Multi-start extragradient. Even restarts start uniformly in the Chebyshev ball; odd
/// restarts start in a ball four times the bounding-box radius and are projected, which
/// lands them on faces and vertices of the feasible set.
inline SolutionCloud solution_cloud(const ViProblem& P, int restarts, std::uint64_t seed, const SolverConfig& cfg = {},
                                    double dedupe_radius = 1e-4) {
  require(restarts >= 1, "solution_cloud: restarts must be at least 1");
  require(dedupe_radius >= 0.0, "solution_cloud: dedupe radius must be nonnegative");
  const SolverConfig c = cfg.resolved(P);
  SolutionCloud cloud;
  cloud.dedupe_radius = dedupe_radius;
  cloud.problem_hash = P.hash();
  cloud.restarts = restarts;
  const Vector& center = P.chebyshev().center;
  const double outer = 2.0 * std::max(P.box().diameter(), 1e-12);
  for (int i = 0; i < restarts; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Vector x0 = i % 2 == 0 ? rng.in_ball(center, P.chebyshev().radius) : rng.in_ball(center, outer);
    const SolveResult r = extragradient_solve(P, x0, c);
    if (!r.converged || !is_solution(P, r.point, c.tol, c.step)) continue;
    ++cloud.verified;
    bool fresh = true;
    for (const auto& q : cloud.points)
      if ((q - r.point).norm() < dedupe_radius) {
        fresh = false;
        break;
      }
    if (fresh) cloud.points.push_back(r.point);
  }
  if (cloud.empty())
    throw NumericalFailure("solution_cloud: none of " + std::to_string(restarts) +
                           " restarts produced a verified solution");
  return cloud;
}

/// True iff some cloud point violates the constraint block of delta by more than tol.
inline bool cloud_violates(const SolutionCloud& cloud, const ScenarioProgram& program, const Vector& delta,
                           double tol = 1e-6) {
  require(!cloud.empty(), "cloud_violates: cloud is empty");
  const Polytope Xd = program.sample_polytope(delta);
  for (const auto& x : cloud.points)
    if (!contains(Xd, x, tol)) return true;
  return false;
}

} // namespace scenvi
