#pragma once

#include "scenvi/convex/polytope.hpp"
#include "scenvi/core/random.hpp"
#include "scenvi/vi/vi_problem.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace scenvi {

/// K drawn uncertainty vectors, all of length ell.
struct Multisample {
  std::vector<Vector> samples;
  std::uint64_t seed = 0;

  Index size() const { return static_cast<Index>(samples.size()); }
  bool empty() const { return samples.empty(); }

  /// First K samples; with keyed per-sample streams this is the K-multisample of the same draw.
  Multisample prefix(Index K) const {
    require(K >= 0 && K <= size(), "Multisample::prefix: K out of range");
    return {{samples.begin(), samples.begin() + K}, seed};
  }
};

/// One sampled constraint block A(delta) x <= b(delta).
struct SampleBlock {
  Matrix A;
  Vector b;
};

using SampleRule = std::function<SampleBlock(const Vector& delta)>;
using Sampler = std::function<Vector(Rng&)>;

/// Base polytope plus the rule delta -> (A(delta), b(delta)).
/// The sampler, when present, draws delta from the uncertainty distribution.
class ScenarioProgram {
public:
  ScenarioProgram(Polytope base, SampleRule rule, Index p, Index ell, Sampler sampler = {})
      : base_(std::move(base)), rule_(std::move(rule)), p_(p), ell_(ell), sampler_(std::move(sampler)) {
    require(base_.rows() > 0, "ScenarioProgram: base polytope has no rows");
    require(p_ >= 1 && ell_ >= 0, "ScenarioProgram: block size must be positive");
    require(static_cast<bool>(rule_), "ScenarioProgram: missing sample rule");
  }

  /// Samples are flattened blocks [A | b] in row-major order, so ell = p (n + 1).
  static ScenarioProgram explicit_halfspaces(Polytope base, Index p) {
    const Index n = base.dim();
    auto rule = [n, p](const Vector& d) {
      SampleBlock blk{Matrix(p, n), Vector(p)};
      for (Index r = 0; r < p; ++r) {
        for (Index j = 0; j < n; ++j) blk.A(r, j) = d[r * (n + 1) + j];
        blk.b[r] = d[r * (n + 1) + n];
      }
      return blk;
    };
    return {std::move(base), rule, p, p * (n + 1)};
  }

  const Polytope& base() const { return base_; }
  Index n() const { return base_.dim(); }
  Index m() const { return base_.rows(); }
  Index p() const { return p_; }
  Index ell() const { return ell_; }
  bool has_sampler() const { return static_cast<bool>(sampler_); }

  SampleBlock block(const Vector& delta) const {
    require(delta.size() == ell_, "ScenarioProgram: sample has length " + std::to_string(delta.size()) +
                                      ", expected " + std::to_string(ell_));
    SampleBlock blk = rule_(delta);
    require(blk.A.rows() == p_ && blk.A.cols() == n() && blk.b.size() == p_,
            "ScenarioProgram: sample rule returned a block of the wrong shape");
    return blk;
  }

  Polytope sample_polytope(const Vector& delta) const {
    SampleBlock blk = block(delta);
    return {std::move(blk.A), std::move(blk.b)};
  }

  Vector draw_one(Rng& rng) const {
    require(has_sampler(), "ScenarioProgram: no sampling distribution attached");
    Vector d = sampler_(rng);
    require(d.size() == ell_, "ScenarioProgram: sampler returned wrong length");
    return d;
  }

  /// Sample k is drawn from stream derive_seed(seed, k), so draws are nested in K.
  Multisample draw(Index K, std::uint64_t seed) const {
    require(K >= 0, "ScenarioProgram::draw: K must be nonnegative");
    Multisample ms{{}, seed};
    ms.samples.reserve(static_cast<std::size_t>(K));
    for (Index k = 0; k < K; ++k) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
      ms.samples.push_back(draw_one(rng));
    }
    return ms;
  }

private:
  Polytope base_;
  SampleRule rule_;
  Index p_;
  Index ell_;
  Sampler sampler_;
};

/// Base rows followed by one p-row block per sample; m + K p rows.
inline Polytope assemble(const ScenarioProgram& program, const Multisample& ms) {
  const Index K = ms.size();
  const Index p = program.p();
  Matrix A(K * p, program.n());
  Vector b(K * p);
  std::vector<RowTag> tags;
  tags.reserve(static_cast<std::size_t>(K * p));
  for (Index k = 0; k < K; ++k) {
    const SampleBlock blk = program.block(ms.samples[static_cast<std::size_t>(k)]);
    A.middleRows(k * p, p) = blk.A;
    b.segment(k * p, p) = blk.b;
    for (Index r = 0; r < p; ++r) tags.push_back(RowTag::sample_row(static_cast<int>(k), static_cast<int>(r)));
  }
  return program.base().append(A, b, tags);
}

inline ViProblem scenario_problem(const ScenarioProgram& program, const Multisample& ms, const AffineMapping& F) {
  return {F, assemble(program, ms)};
}

} // namespace scenvi
