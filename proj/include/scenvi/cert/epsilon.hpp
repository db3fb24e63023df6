#pragma once

#include "scenvi/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace scenvi {

/// ln C(n, k).
inline double log_binomial(long long n, long long k) {
  require(n >= 0 && k >= 0 && k <= n,
          "log_binomial: need 0 <= k <= n, got n = " + std::to_string(n) + ", k = " + std::to_string(k));
  const long long j = std::min(k, n - k);
  if (j <= 64) {
    double s = 0.0;
    for (long long i = 1; i <= j; ++i) s += std::log(static_cast<double>(n - j + i) / static_cast<double>(i));
    return s;
  }
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace detail {

inline void check_schedule_args(long long K, long long h, double beta, const char* who) {
  require(K >= 1, std::string(who) + ": K must be at least 1");
  require(h >= 0 && h <= K, std::string(who) + ": need 0 <= h <= K");
  require(beta > 0.0 && beta < 1.0, std::string(who) + ": beta must lie in (0, 1)");
}

} // namespace detail

/// Even split of beta over the K terms: 1 - (beta / (K C(K,h)))^(1/(K-h)), and 1 at h = K.
inline double epsilon_split(long long K, long long h, double beta) {
  detail::check_schedule_args(K, h, beta, "epsilon_split");
  if (h == K) return 1.0;
  const double e = (std::log(beta) - std::log(static_cast<double>(K)) - log_binomial(K, h)) / static_cast<double>(K - h);
  return std::clamp(-std::expm1(e), 0.0, 1.0);
}

inline std::vector<double> split_schedule(long long K, double beta) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(K + 1));
  for (long long h = 0; h <= K; ++h) s.push_back(epsilon_split(K, h, beta));
  return s;
}

/// ln(1 - eps(h)) of the split schedule, -inf at h = K. Near h = K the split values are
/// within 1e-12 of 1, where a double eps no longer carries 1 - eps accurately.
inline std::vector<double> split_log_complements(long long K, double beta) {
  detail::check_schedule_args(K, 0, beta, "split_log_complements");
  std::vector<double> l;
  l.reserve(static_cast<std::size_t>(K + 1));
  for (long long h = 0; h < K; ++h)
    l.push_back(std::min(0.0, (std::log(beta) - std::log(static_cast<double>(K)) - log_binomial(K, h)) /
                                  static_cast<double>(K - h)));
  l.push_back(-std::numeric_limits<double>::infinity());
  return l;
}

/// sum_{h<K} C(K,h) (1 - eps_h)^(K-h) from l_h = ln(1 - eps_h); terms formed in log domain, Neumaier-summed.
inline double verify_schedule_log(long long K, double beta, const std::vector<double>& log_complement) {
  require(K >= 1, "verify_schedule: K must be at least 1");
  require(beta > 0.0 && beta < 1.0, "verify_schedule: beta must lie in (0, 1)");
  require(static_cast<long long>(log_complement.size()) == K + 1,
          "verify_schedule: schedule must have K + 1 = " + std::to_string(K + 1) + " entries");
  for (const double l : log_complement) require(!(l > 0.0) && !std::isnan(l), "verify_schedule: entries must lie in [0, 1]");
  require(std::isinf(log_complement.back()), "verify_schedule: eps(K) must equal 1");
  double sum = 0.0, comp = 0.0;
  for (long long h = 0; h < K; ++h) {
    const double l = log_complement[static_cast<std::size_t>(h)];
    if (std::isinf(l)) continue;
    const double term = std::exp(log_binomial(K, h) + static_cast<double>(K - h) * l);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

inline double verify_schedule(long long K, double beta, const std::vector<double>& schedule) {
  require(static_cast<long long>(schedule.size()) == K + 1,
          "verify_schedule: schedule must have K + 1 = " + std::to_string(K + 1) + " entries");
  std::vector<double> l;
  l.reserve(schedule.size());
  for (const double e : schedule) {
    require(e >= 0.0 && e <= 1.0, "verify_schedule: entries must lie in [0, 1]");
    l.push_back(e >= 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-e));
  }
  return verify_schedule_log(K, beta, l);
}

struct WaitAndJudgeRoot {
  double t = 1.0;         // root in (0, 1); epsilon = 1 - t
  double residual = 0.0;  // normalized polynomial value at t
};

namespace detail {

// g(t) = (beta/(K+1)) sum_{m=h}^{K} C(m,h) t^(m-h) - C(K,h) t^(K-h), divided by C(K,h).
// Terms are formed as exp(log term - log C(K,h)); t = 0 is handled separately.
inline double wj_normalized(long long K, long long h, double beta, double t) {
  const double lck = log_binomial(K, h);
  const double lb = std::log(beta / static_cast<double>(K + 1));
  double sum = 0.0, comp = 0.0;
  for (long long m = h; m <= K; ++m) {
    const double pw = m == h ? 0.0 : (t <= 0.0 ? -std::numeric_limits<double>::infinity()
                                               : static_cast<double>(m - h) * std::log(t));
    const double term = std::exp(lb + log_binomial(m, h) + pw - lck);
    const double s = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
  }
  const double last = K == h ? 1.0 : (t <= 0.0 ? 0.0 : std::exp(static_cast<double>(K - h) * std::log(t)));
  return (sum + comp) - last;
}

} // namespace detail

/// Bisection for the root of the wait-and-judge polynomial on (0, 1).
inline WaitAndJudgeRoot wait_and_judge_root(long long K, long long h, double beta) {
  detail::check_schedule_args(K, h, beta, "epsilon_wait_and_judge");
  require(h < K, "wait_and_judge_root: h must be below K");
  double lo = 0.0, hi = 1.0;
  const double glo = detail::wj_normalized(K, h, beta, lo);
  const double ghi = detail::wj_normalized(K, h, beta, hi);
  if (!(glo > 0.0 && ghi < 0.0))
    throw NumericalFailure("epsilon_wait_and_judge: no sign change on (0,1) for (K, h, beta) = (" + std::to_string(K) +
                           ", " + std::to_string(h) + ", " + std::to_string(beta) + ")");
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (detail::wj_normalized(K, h, beta, mid) > 0.0 ? lo : hi) = mid;
  }
  const double glo2 = detail::wj_normalized(K, h, beta, lo);
  const double ghi2 = detail::wj_normalized(K, h, beta, hi);
  return std::abs(glo2) <= std::abs(ghi2) ? WaitAndJudgeRoot{lo, glo2} : WaitAndJudgeRoot{hi, ghi2};
}

inline double epsilon_wait_and_judge(long long K, long long h, double beta) {
  detail::check_schedule_args(K, h, beta, "epsilon_wait_and_judge");
  if (h == K) return 1.0;
  return std::clamp(1.0 - wait_and_judge_root(K, h, beta).t, 0.0, 1.0);
}

} // namespace scenvi
