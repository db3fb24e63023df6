#pragma once

#include "scenvi/convex/projection.hpp"
#include "scenvi/vi/vi_problem.hpp"

#include <optional>
#include <string>

namespace scenvi {

struct SolverConfig {
  double step = 0.0;   // <= 0: problem default
  double tol = 1e-6;
  int max_iter = -1;   // < 0: 50 n + 10000

  SolverConfig resolved(const ViProblem& P) const {
    SolverConfig c = *this;
    if (c.step <= 0.0) c.step = P.default_step();
    if (c.max_iter < 0) c.max_iter = static_cast<int>(50 * P.dim() + 10000);
    return c;
  }
};

struct SolveResult {
  Vector point;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline Vector checked(const ProjectionResult& r, const char* where) {
  if (r.status == ProjectionStatus::infeasible) throw ContractError(std::string(where) + ": feasible set is empty");
  if (!r.ok())
    throw NumericalFailure(std::string(where) + ": projection failed (KKT residual " +
                           std::to_string(r.kkt_residual) + ")");
  return r.point;
}

// Extragradient loop over an arbitrary projector.
template <class Proj>
SolveResult extragradient(const AffineMapping& F, Proj&& proj, Vector x, double step, double tol, int max_iter) {
  SolveResult out;
  for (int k = 0;; ++k) {
    const Vector y = proj(x - step * F.evaluate(x));
    out.residual = (x - y).norm();
    out.iterations = k;
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
    if (k >= max_iter) break;
    x = proj(x - step * F.evaluate(y));
  }
  out.point = std::move(x);
  return out;
}

} // namespace detail

inline SolveResult extragradient_solve(const ViProblem& P, const Vector& x0, double step, double tol, int max_iter) {
  require(x0.size() == P.dim(), "extragradient_solve: start point has wrong dimension");
  require(tol > 0.0, "extragradient_solve: tolerance must be positive");
  require(max_iter >= 0, "extragradient_solve: max_iter must be nonnegative");
  const double L = P.lipschitz();
  require(step > 0.0 && (L <= 1e-12 || step < 1.0 / L),
          "extragradient_solve: step " + std::to_string(step) + " outside (0, 1/L) with L = " + std::to_string(L));
  auto proj = [&](const Vector& z) { return detail::checked(project(P.feasible(), z), "extragradient_solve"); };
  Vector x = contains(P.feasible(), x0, 1e-12) ? x0 : proj(x0);
  return detail::extragradient(P.mapping(), proj, std::move(x), step, tol, max_iter);
}

inline SolveResult extragradient_solve(const ViProblem& P, const Vector& x0, const SolverConfig& cfg = {}) {
  const SolverConfig c = cfg.resolved(P);
  return extragradient_solve(P, x0, c.step, c.tol, c.max_iter);
}

/// ||x - proj_X(x - gamma F(x))||.
inline double natural_residual(const ViProblem& P, const Vector& x, double gamma) {
  require(gamma > 0.0, "natural_residual: gamma must be positive");
  require(x.size() == P.dim(), "natural_residual: dimension mismatch");
  const Vector y = detail::checked(project(P.feasible(), x - gamma * P.mapping().evaluate(x)), "natural_residual");
  return (x - y).norm();
}

inline bool is_solution(const ViProblem& P, const Vector& x, double tol, double gamma) {
  if (x.size() != P.dim()) return false;
  if (!contains(P.feasible(), x, tol)) return false;
  return natural_residual(P, x, gamma) <= tol;
}

inline bool is_solution(const ViProblem& P, const Vector& x, double tol = 1e-6) {
  return is_solution(P, x, tol, P.default_step());
}

/// Solves the VI on X intersected with {a^T x = b} and keeps the result only if it
/// solves the VI on the whole of X. Empty when the slice is empty or the check fails.
inline std::optional<Vector> solve_on_facet(const ViProblem& P, const Vector& a, double b,
                                            const SolverConfig& cfg = {}) {
  require(a.size() == P.dim(), "solve_on_facet: facet normal has wrong dimension");
  const SolverConfig c = cfg.resolved(P);
  const Matrix E = a.transpose();
  Vector e(1);
  e << b;
  auto proj = [&](const Vector& z) {
    const ProjectionResult r = project(P.feasible().A(), P.feasible().b(), E, e, z);
    if (!r.ok()) throw NumericalFailure("solve_on_facet: slice projection failed");
    return r.point;
  };
  const ProjectionResult start = project(P.feasible().A(), P.feasible().b(), E, e, P.chebyshev().center);
  if (start.status == ProjectionStatus::infeasible) return std::nullopt;
  if (!start.ok()) throw NumericalFailure("solve_on_facet: slice projection failed");

  const SolveResult r = detail::extragradient(P.mapping(), proj, start.point, c.step, c.tol / 10.0, c.max_iter);
  if (!r.converged)
    throw NumericalFailure("solve_on_facet: no convergence within " + std::to_string(c.max_iter) +
                           " iterations (residual " + std::to_string(r.residual) + ")");
  if (!is_solution(P, r.point, c.tol, c.step)) return std::nullopt;
  return r.point;
}

/// Facet given by row `row` of the feasible polytope.
inline std::optional<Vector> solve_on_facet(const ViProblem& P, Index row, const SolverConfig& cfg = {}) {
  require(row >= 0 && row < P.feasible().rows(), "solve_on_facet: row index out of range");
  return solve_on_facet(P, P.feasible().A().row(row).transpose(), P.feasible().b()[row], cfg);
}

} // namespace scenvi
