#pragma once

#include "scenvi/convex/redundancy.hpp"
#include "scenvi/scenario/program.hpp"
#include "scenvi/vi/extragradient.hpp"

#include <map>
#include <string>
#include <vector>

namespace scenvi {

struct ActiveSamples {
  std::vector<int> samples;                // A_K, ascending, 0-based
  std::vector<std::vector<Index>> facets;  // per entry of `samples`: its kept rows, indexed into `reduced`
  Polytope reduced;                        // minimal representation of the assembled polytope
};

/// Samples with at least one row in the minimal representation of the assembled polytope.
inline ActiveSamples active_samples(const ScenarioProgram& program, const Multisample& ms) {
  const Polytope P = assemble(program, ms);
  const MinimalRepresentation mr = minimal_representation(P);
  std::map<int, std::vector<Index>> by_sample;
  for (Index r = 0; r < mr.reduced.rows(); ++r) {
    const RowTag& t = mr.reduced.tag(r);
    if (t.is_sample()) by_sample[t.sample].push_back(r);
  }
  ActiveSamples out;
  for (auto& [k, rows] : by_sample) {
    out.samples.push_back(k);
    out.facets.push_back(std::move(rows));
  }
  out.reduced = mr.reduced;
  return out;
}

inline Index v_K(const ScenarioProgram& program, const Multisample& ms) {
  return static_cast<Index>(active_samples(program, ms).samples.size());
}

struct SupportResult {
  Index s_K = 0;
  std::vector<int> supporting;  // subset of active.samples
  ActiveSamples active;

  Index v_K() const { return static_cast<Index>(active.samples.size()); }
};

/// Support-subsample cardinality: an active sample counts when one of its surviving
/// facets carries a point of the full solution set.
inline SupportResult support_cardinality(const ScenarioProgram& program, const Multisample& ms,
                                         const AffineMapping& F, const SolverConfig& cfg = {}) {
  SupportResult out;
  out.active = active_samples(program, ms);
  if (out.active.samples.empty()) return out;
  const ViProblem P(F, out.active.reduced);
  for (std::size_t a = 0; a < out.active.samples.size(); ++a) {
    const int k = out.active.samples[a];
    for (const Index r : out.active.facets[a]) {
      std::optional<Vector> x;
      try {
        x = solve_on_facet(P, r, cfg);
      } catch (const NumericalFailure& e) {
        throw NumericalFailure("support_cardinality: facet of sample " + std::to_string(k) + " (row " +
                               std::to_string(out.active.reduced.tag(r).row) + "): " + e.what());
      }
      if (x) {
        out.supporting.push_back(k);
        break;
      }
    }
  }
  out.s_K = static_cast<Index>(out.supporting.size());
  return out;
}

} // namespace scenvi
