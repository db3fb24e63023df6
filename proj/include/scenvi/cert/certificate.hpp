#pragma once

#include "scenvi/cert/epsilon.hpp"
#include "scenvi/core/hash.hpp"
#include "scenvi/scenario/support.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scenvi {

enum class EpsilonMode { split, wait_and_judge };

inline const char* to_string(EpsilonMode m) { return m == EpsilonMode::split ? "split" : "wait_and_judge"; }

inline EpsilonMode parse_epsilon_mode(const std::string& s) {
  if (s == "split") return EpsilonMode::split;
  if (s == "wj" || s == "wait_and_judge" || s == "wait-and-judge") return EpsilonMode::wait_and_judge;
  throw ContractError("unknown epsilon mode '" + s + "' (expected split or wj)");
}

/// The wait-and-judge value assumes a non-degenerate VI; the mode field records which was used.
struct Certificate {
  Index K = 0;
  Index s_K = 0;
  Index v_K = 0;
  double beta = 0.0;
  double epsilon = 1.0;
  EpsilonMode mode = EpsilonMode::split;
  bool vacuous = false;  // K = 0: no samples, epsilon fixed at 1
  std::vector<int> supporting;
  std::string instance_hash;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
};

inline double epsilon_for(EpsilonMode mode, long long K, long long h, double beta) {
  return mode == EpsilonMode::split ? epsilon_split(K, h, beta) : epsilon_wait_and_judge(K, h, beta);
}

/// Hash over the base polytope, the assembled sample blocks and the mapping.
inline std::string instance_hash(const ScenarioProgram& program, const Multisample& ms, const AffineMapping& F) {
  const Polytope P = assemble(program, ms);
  Fnv1a h;
  h.add(P.A()).add(P.b()).add(F.M()).add(F.q());
  return h.hex();
}

inline Certificate certify(const ScenarioProgram& program, const Multisample& ms, const AffineMapping& F, double beta,
                           EpsilonMode mode = EpsilonMode::split, const SolverConfig& cfg = {}) {
  require(beta > 0.0 && beta < 1.0, "certify: beta must lie in (0, 1)");
  require(F.dim() == program.n(), "certify: mapping dimension differs from the program's");
  Certificate c;
  c.K = ms.size();
  c.beta = beta;
  c.mode = mode;
  c.seed = ms.seed;
  c.instance_hash = instance_hash(program, ms, F);
  if (c.K == 0) {
    const Polytope P = program.base();
    require(!chebyshev_center(P).empty(), "certify: base polytope is empty");
    c.vacuous = true;
    c.epsilon = 1.0;
    return c;
  }
  const SupportResult s = support_cardinality(program, ms, F, cfg);
  c.s_K = s.s_K;
  c.v_K = s.v_K();
  c.supporting = s.supporting;
  c.epsilon = epsilon_for(mode, c.K, c.s_K, beta);
  return c;
}

} // namespace scenvi
