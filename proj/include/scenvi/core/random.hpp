#pragma once

#include "scenvi/core/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace scenvi {

/// SplitMix64 finalizer; used to derive independent stream seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `stream` under `master`. Streams are keyed, not sequential,
/// so results do not depend on the order in which tasks are executed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded generator with bit-exact uniform and normal draws across standard libraries
/// (the std distributions are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform point in the Euclidean ball of the given center and radius.
  Vector in_ball(const Vector& center, double radius) {
    const Index n = center.size();
    Vector d = normal_vector(n);
    double nd = d.norm();
    while (nd == 0.0) {
      d = normal_vector(n);
      nd = d.norm();
    }
    const double rho = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return center + (rho / nd) * d;
  }

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace scenvi
