#pragma once

#include "scenvi/scenario/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace scenvi {

/// Key of the fresh-sample stream; certification samples use derive_seed(seed, k) directly,
/// so fresh draws never coincide with them.
inline constexpr std::uint64_t kFreshStream = 0xF4E5D0C3B2A19080ULL;

inline std::uint64_t fresh_seed(std::uint64_t seed, std::uint64_t batch) {
  return derive_seed(derive_seed(seed, kFreshStream), batch);
}

struct ViolationReport {
  Index fresh_count = 0;       // per repetition
  Index violated_count = 0;    // summed over repetitions
  double v_hat = 0.0;          // violated_count / (fresh_count * repetitions)
  std::vector<double> repetitions;
  double v_max = 0.0;
  double v_avg = 0.0;
  double epsilon_used = std::numeric_limits<double>::quiet_NaN();
  std::vector<bool> bound_held;

  bool all_held() const { return std::all_of(bound_held.begin(), bound_held.end(), [](bool b) { return b; }); }
};

namespace detail {

inline void finish(ViolationReport& r, double epsilon) {
  r.epsilon_used = epsilon;
  const double total = static_cast<double>(r.fresh_count) * static_cast<double>(r.repetitions.size());
  r.v_hat = total > 0 ? static_cast<double>(r.violated_count) / total : 0.0;
  r.v_max = r.repetitions.empty() ? 0.0 : *std::max_element(r.repetitions.begin(), r.repetitions.end());
  r.v_avg = r.repetitions.empty() ? 0.0
                                  : std::accumulate(r.repetitions.begin(), r.repetitions.end(), 0.0) /
                                        static_cast<double>(r.repetitions.size());
  r.bound_held.clear();
  for (const double v : r.repetitions) r.bound_held.push_back(std::isnan(epsilon) || v <= epsilon);
}

} // namespace detail

/// Violation fraction of the cloud over the given fresh samples (one repetition).
inline ViolationReport estimate_violation(const SolutionCloud& cloud, const ScenarioProgram& program,
                                          const std::vector<Vector>& fresh,
                                          double epsilon = std::numeric_limits<double>::quiet_NaN()) {
  require(!fresh.empty(), "estimate_violation: need at least one fresh sample");
  require(!cloud.empty(), "estimate_violation: cloud is empty");
  ViolationReport r;
  r.fresh_count = static_cast<Index>(fresh.size());
  for (const auto& d : fresh)
    if (cloud_violates(cloud, program, d)) ++r.violated_count;
  r.repetitions.push_back(static_cast<double>(r.violated_count) / static_cast<double>(r.fresh_count));
  detail::finish(r, epsilon);
  return r;
}

/// `repetitions` independent batches of `fresh` new draws from the program's distribution.
inline ViolationReport estimate_violation(const SolutionCloud& cloud, const ScenarioProgram& program, Index fresh,
                                          std::uint64_t seed, int repetitions = 1,
                                          double epsilon = std::numeric_limits<double>::quiet_NaN()) {
  require(fresh >= 1 && repetitions >= 1, "estimate_violation: fresh and repetitions must be at least 1");
  require(!cloud.empty(), "estimate_violation: cloud is empty");
  ViolationReport r;
  r.fresh_count = fresh;
  for (int rep = 0; rep < repetitions; ++rep) {
    Index bad = 0;
    for (Index j = 0; j < fresh; ++j) {
      Rng rng(fresh_seed(seed, static_cast<std::uint64_t>(rep) * static_cast<std::uint64_t>(fresh) +
                                   static_cast<std::uint64_t>(j)));
      if (cloud_violates(cloud, program, program.draw_one(rng))) ++bad;
    }
    r.violated_count += bad;
    r.repetitions.push_back(static_cast<double>(bad) / static_cast<double>(fresh));
  }
  detail::finish(r, epsilon);
  return r;
}

} // namespace scenvi
