#pragma once

#include "scenvi/convex/geometry.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <vector>

namespace scenvi {

/// Absolute slack allowed between the relaxed-row optimum and b_i before a row counts as cutting.
inline constexpr double kRedundancyTol = 1e-7;

namespace detail {

// max a_i^T x over the rows listed in `others` plus the relaxed row a_i^T x <= b_i + 1.
inline bool redundant_against(const Matrix& A, const Vector& b, std::span<const Index> others, Index i,
                              double tol, const Vector* start) {
  const Index n = A.cols();
  const Index k = static_cast<Index>(others.size());
  Matrix As(k + 1, n);
  Vector bs(k + 1);
  for (Index r = 0; r < k; ++r) {
    As.row(r) = A.row(others[static_cast<std::size_t>(r)]);
    bs[r] = b[others[static_cast<std::size_t>(r)]];
  }
  As.row(k) = A.row(i);
  bs[k] = b[i] + 1.0;
  const Vector c = A.row(i).transpose();
  const LpResult res = lp_solve(c, As, bs, Sense::maximize, start);
  if (res.status == LpStatus::infeasible)
    throw ContractError("redundancy test on row " + std::to_string(i) +
                        ": the system without this row is empty (degenerate input)");
  if (res.status == LpStatus::unbounded) return false;
  if (res.status != LpStatus::optimal)
    throw NumericalFailure("redundancy test on row " + std::to_string(i) + ": LP " + to_string(res.status));
  return res.value <= b[i] + tol;
}

} // namespace detail

/// True iff row i can be removed without enlarging P: maximising a_i^T x over the other
/// rows plus a_i^T x <= b_i + 1 does not exceed b_i + tol.
inline bool is_row_redundant(const Polytope& P, Index i, double tol = kRedundancyTol) {
  require(i >= 0 && i < P.rows(), "is_row_redundant: row index out of range");
  std::vector<Index> others;
  others.reserve(static_cast<std::size_t>(P.rows()));
  for (Index r = 0; r < P.rows(); ++r)
    if (r != i) others.push_back(r);
  return detail::redundant_against(P.A(), P.b(), others, i, tol, nullptr);
}

struct MinimalRepresentation {
  Polytope reduced;
  std::vector<Index> kept;  // ascending row indices into the input polytope
};

/// Irredundant subsystem describing the same set.
///
/// Parallel rows sharing a normal direction are collapsed to the tightest one first.
/// The survivors are then tested in decreasing index order, each against the rows
/// still retained, so of several identical rows the lowest-index copy is kept.
inline MinimalRepresentation minimal_representation(const Polytope& P, double tol = kRedundancyTol) {
  const Index m = P.rows();
  const Index n = P.dim();
  if (m == 0) return {P, {}};

  Vector start;
  try {
    const ChebyshevBall ball = chebyshev_center(P);
    if (ball.empty()) throw ContractError("minimal_representation: polytope is empty");
    start = ball.center;
  } catch (const ContractError&) {
    const LpResult feas = lp_solve(Vector::Zero(n), P, Sense::maximize);
    if (feas.status == LpStatus::infeasible) throw ContractError("minimal_representation: polytope is empty");
    if (!feas.optimal()) throw NumericalFailure("minimal_representation: feasibility LP failed");
    start = feas.point;
  }

  // Collapse rows with bitwise-identical unit normals.
  std::map<std::vector<double>, Index> tightest;
  std::vector<Index> candidates;
  for (Index i = 0; i < m; ++i) {
    const double nrm = P.A().row(i).norm();
    if (nrm < 1e-14) continue;  // 0 <= b_i with b_i >= 0 (emptiness already excluded)
    std::vector<double> key(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) key[static_cast<std::size_t>(j)] = P.A()(i, j) / nrm;
    auto [it, inserted] = tightest.try_emplace(std::move(key), i);
    if (!inserted) {
      const Index j = it->second;
      if (P.b()[i] / nrm < P.b()[j] / P.A().row(j).norm()) it->second = i;
    }
  }
  for (const auto& [key, i] : tightest) candidates.push_back(i);
  std::sort(candidates.begin(), candidates.end());

  std::vector<Index> alive = candidates;
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    const Index i = *it;
    std::vector<Index> others;
    others.reserve(alive.size());
    for (const Index r : alive)
      if (r != i) others.push_back(r);
    if (detail::redundant_against(P.A(), P.b(), others, i, tol, &start))
      alive.erase(std::find(alive.begin(), alive.end(), i));
  }
  return {P.subset(alive), alive};
}

} // namespace scenvi
