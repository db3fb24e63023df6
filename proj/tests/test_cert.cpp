#include "fixtures.hpp"

#include "scenvi/cert/certificate.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace scenvi {
namespace {

// Exact C(n, k) for small arguments, as an independent reference.
unsigned long long exact_binomial(unsigned n, unsigned k) {
  unsigned long long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Plain power-sum evaluation of the wait-and-judge polynomial (no normalization), usable for small K.
double wj_direct(int K, int h, double beta, double t) {
  double s = 0.0;
  for (int m = h; m <= K; ++m) s += static_cast<double>(exact_binomial(m, h)) * std::pow(t, m - h);
  return beta / (K + 1) * s - static_cast<double>(exact_binomial(K, h)) * std::pow(t, K - h);
}

TEST(LogBinomial, Values) {
  EXPECT_NEAR(log_binomial(5, 2), std::log(10.0), 1e-14);
  EXPECT_EQ(log_binomial(7, 0), 0.0);
  EXPECT_EQ(log_binomial(7, 7), 0.0);
  EXPECT_EQ(exact_binomial(100, 4), 3921225ull);
  EXPECT_NEAR(log_binomial(100, 4), std::log(3921225.0), 1e-12 * std::log(3921225.0));
  for (unsigned n = 0; n <= 60; ++n)
    for (unsigned k = 0; k <= n; ++k) {
      const double ref = std::log(static_cast<double>(exact_binomial(n, k)));
      EXPECT_NEAR(log_binomial(n, k), ref, 1e-12 * std::max(1.0, ref)) << n << "," << k;
    }
  EXPECT_THROW(log_binomial(3, 4), ContractError);
  EXPECT_THROW(log_binomial(3, -1), ContractError);
}

TEST(EpsilonSplit, TableValues) {
  EXPECT_EQ(epsilon_split(10, 10, 0.1), 1.0);
  // closed form 1 - (1e-6 / (100 C(100,4)))^(1/96), evaluated separately; 0.29 is its truncation
  EXPECT_NEAR(epsilon_split(100, 4, 1e-6), 0.2953309616105372, 1e-12);
  EXPECT_EQ(std::floor(100 * epsilon_split(100, 4, 1e-6)) / 100, 0.29);
  EXPECT_NEAR(epsilon_split(1000, 7, 1e-6), 0.06, 0.005);
  EXPECT_NEAR(epsilon_split(10000, 9, 1e-6), 0.01, 0.005);
  EXPECT_NEAR(epsilon_split(3, 1, 0.1), 1.0 - std::sqrt(0.1 / 9.0), 1e-15);
  EXPECT_THROW(epsilon_split(3, 4, 0.1), ContractError);
  EXPECT_THROW(epsilon_split(3, 1, 1.0), ContractError);
}

TEST(EpsilonSplit, NonDecreasingAndInRange) {
  for (long long K = 1; K <= 200; ++K)
    for (const double beta : {0.1, 1e-6}) {
      double prev = -1.0;
      for (long long h = 0; h <= K; ++h) {
        const double e = epsilon_split(K, h, beta);
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, 1.0);
        EXPECT_GE(e, prev) << K << "," << h;
        prev = e;
      }
    }
  double prev = -1.0;
  for (long long h = 0; h <= 10000; h += 37) {
    const double e = epsilon_split(10000, h, 1e-6);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(VerifySchedule, SplitIsExact) {
  for (const long long K : {3, 10, 100, 1000})
    for (const double beta : {0.1, 1e-6}) {
      const double s = verify_schedule_log(K, beta, split_log_complements(K, beta));
      EXPECT_LE(std::abs(s - beta) / beta, 1e-9) << K << "," << beta;
      // plain eps values lose 1 - eps near h = K but stay close
      EXPECT_LE(std::abs(verify_schedule(K, beta, split_schedule(K, beta)) - beta) / beta, 1e-6);
    }
  EXPECT_LE(std::abs(verify_schedule(3, 0.1, split_schedule(3, 0.1)) - 0.1) / 0.1, 1e-12);
  EXPECT_EQ(verify_schedule(4, 0.1, std::vector<double>(5, 1.0)), 0.0);
  EXPECT_THROW(verify_schedule(4, 0.1, std::vector<double>(4, 1.0)), ContractError);
  EXPECT_THROW(verify_schedule_log(4, 0.1, std::vector<double>(5, 0.1)), ContractError);
  std::vector<double> bad(5, 0.5);
  EXPECT_THROW(verify_schedule(4, 0.1, bad), ContractError);
}

TEST(WaitAndJudge, RootsAgainstDirectPolynomial) {
  for (int K = 2; K <= 30; ++K)
    for (int h = 0; h < K; ++h) {
      const WaitAndJudgeRoot r = wait_and_judge_root(K, h, 0.05);
      ASSERT_GT(r.t, 0.0);
      ASSERT_LT(r.t, 1.0);
      EXPECT_LE(std::abs(r.residual), 1e-10);
      // sign change of the unnormalized polynomial around the root
      EXPECT_GE(wj_direct(K, h, 0.05, r.t - 1e-9), -1e-9);
      EXPECT_LE(wj_direct(K, h, 0.05, r.t + 1e-9), 1e-9);
    }
}

TEST(WaitAndJudge, TableTriples) {
  EXPECT_EQ(epsilon_wait_and_judge(10, 10, 0.1), 1.0);
  const long long K[3] = {100, 1000, 10000};
  const long long h[3] = {4, 7, 9};
  for (int i = 0; i < 3; ++i) {
    const WaitAndJudgeRoot r = wait_and_judge_root(K[i], h[i], 1e-6);
    EXPECT_LE(std::abs(r.residual), 1e-10);
    const double wj = epsilon_wait_and_judge(K[i], h[i], 1e-6);
    EXPECT_LE(wj, epsilon_split(K[i], h[i], 1e-6));
    EXPECT_GT(wj, 0.0);
  }
  EXPECT_LE(epsilon_wait_and_judge(1000, 7, 1e-6), 0.065);
}

TEST(Certify, Triangle) {
  const auto prog = fixture::triangle_program();
  const Certificate c3 = certify(prog, fixture::triangle_samples(3), fixture::triangle_mapping(), 0.1);
  EXPECT_EQ(c3.s_K, 1);
  EXPECT_EQ(c3.v_K, 1);
  EXPECT_NEAR(c3.epsilon, 1.0 - std::sqrt(0.1 / 9.0), 1e-12);
  EXPECT_NEAR(c3.epsilon, 0.8946, 1e-4);
  const Certificate c2 = certify(prog, fixture::triangle_samples(2), fixture::triangle_mapping(), 0.1);
  EXPECT_EQ(c2.s_K, 2);
  EXPECT_EQ(c2.epsilon, 1.0);
  const Certificate c0 = certify(prog, fixture::triangle_samples(0), fixture::triangle_mapping(), 0.1);
  EXPECT_TRUE(c0.vacuous);
  EXPECT_EQ(c0.s_K, 0);
  EXPECT_EQ(c0.epsilon, 1.0);
  const Certificate wj =
      certify(prog, fixture::triangle_samples(3), fixture::triangle_mapping(), 0.1, EpsilonMode::wait_and_judge);
  EXPECT_EQ(wj.mode, EpsilonMode::wait_and_judge);
  EXPECT_NEAR(wj.epsilon, 1.0 - wait_and_judge_root(3, 1, 0.1).t, 1e-15);
  EXPECT_THROW(certify(prog, fixture::triangle_samples(3), fixture::triangle_mapping(), 0.0), ContractError);
}

TEST(Certify, Deterministic) {
  const auto prog = fixture::triangle_program();
  const Certificate a = certify(prog, fixture::triangle_samples(3), fixture::triangle_mapping(), 0.1);
  const Certificate b = certify(prog, fixture::triangle_samples(3), fixture::triangle_mapping(), 0.1);
  EXPECT_EQ(a.instance_hash, b.instance_hash);
  EXPECT_EQ(a.epsilon, b.epsilon);
  EXPECT_EQ(a.supporting, b.supporting);
  EXPECT_NE(a.instance_hash, certify(prog, fixture::triangle_samples(2), fixture::triangle_mapping(), 0.1).instance_hash);
}

TEST(EpsilonMode, Parse) {
  EXPECT_EQ(parse_epsilon_mode("split"), EpsilonMode::split);
  EXPECT_EQ(parse_epsilon_mode("wj"), EpsilonMode::wait_and_judge);
  EXPECT_THROW(parse_epsilon_mode("other"), ContractError);
}

} // namespace
} // namespace scenvi
