#include "scenvi/pev/pev.hpp"
#include "scenvi/scenario/support.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace scenvi::pev {
namespace {

DemandProfile desk_profile(int N = 5, int T = 8) { return {synthetic_base_profile(N, T)}; }

TEST(LoadProfiles, AveragesRows) {
  std::istringstream one("1,2,3\n");
  EXPECT_EQ(average_profiles(csv::read(one), 3, "mem").d_nom, (Vector(3) << 1, 2, 3).finished());
  std::istringstream two("# comment\n0,0\n2,4\n");
  EXPECT_EQ(average_profiles(csv::read(two), 2, "mem").d_nom, (Vector(2) << 1, 2).finished());
}

TEST(LoadProfiles, RecoversBaseFromNoisyRows) {
  const auto rows = synthetic_profiles(5, 8, 100, 3);
  std::ostringstream out;
  for (const auto& r : rows) csv::write_row(out, r);
  std::istringstream in(out.str());
  const DemandProfile p = average_profiles(csv::read(in), 8, "mem");
  Vector mean = Vector::Zero(8);
  for (const auto& r : rows) mean += r;
  mean /= 100.0;
  EXPECT_LE((p.d_nom - mean).cwiseAbs().maxCoeff(), 1e-12);
  // 3% noise over 100 rows: standard error about 0.3% of the base
  const Vector base = synthetic_base_profile(5, 8);
  EXPECT_LE(((p.d_nom - base).array() / base.array()).abs().maxCoeff(), 0.015);
}

TEST(LoadProfiles, ReportsRowNumbers) {
  std::istringstream ragged("1,2,3\n4,5\n");
  try {
    average_profiles(csv::read(ragged, "p.csv"), 3, "p.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("p.csv:2"), std::string::npos) << e.what();
  }
  std::istringstream neg("1,2,3\n\n1,-2,3\n");
  try {
    average_profiles(csv::read(neg, "p.csv"), 3, "p.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("p.csv:3"), std::string::npos) << e.what();
  }
  std::istringstream junk("1,x,3\n");
  EXPECT_THROW(csv::read(junk), ParseError);
  EXPECT_THROW(load_demand_profiles("/nonexistent/profiles.csv", 3), ParseError);
}

TEST(BuildGame, SingleVehicleRows) {
  PevConfig c;
  c.N = 1;
  c.T = 2;
  c.eta = Vector::Zero(2);
  c.b = Vector::Constant(1, 0.5);
  c.s0 = Vector::Constant(1, 0.0);
  c.gamma = Vector::Constant(1, 1.0);
  c.d_max = 1e6;
  const PevGame g = build_game(c, DemandProfile{Vector::Zero(2)});
  const Polytope& B = g.program.base();
  ASSERT_EQ(B.rows(), 4 * 2 + 1);
  EXPECT_EQ(B.A().row(8), (Matrix(1, 2) << -1, -1).finished());
  EXPECT_EQ(B.b()[8], -1.0);
  // B x <= 1 - s0 with B lower triangular in b
  EXPECT_EQ(B.A().row(7), (Matrix(1, 2) << 0.5, 0.5).finished());
  EXPECT_TRUE(chebyshev_center(B).radius >= 0.0);
}

TEST(BuildGame, MappingShape) {
  const DemandProfile prof = desk_profile(2, 3);
  PevConfig c = generate_config(2, 3, prof, 1);
  c.eta = (Vector(3) << 1, 2, 3).finished();
  const PevGame g = build_game(c, prof);
  EXPECT_EQ(g.mapping.M(), Matrix::Constant(6, 6, 0.01));
  EXPECT_EQ(g.mapping.q(), (Vector(6) << 1, 2, 3, 1, 2, 3).finished());
  EXPECT_EQ(monotonicity_classify(g.mapping).kind, Monotonicity::monotone);
  EXPECT_NEAR(lipschitz_upper_bound(g.mapping), 0.01 * 6, 0.06 * 1e-6 + 1e-15);
  EXPECT_GE(lipschitz_upper_bound(g.mapping), 0.06);
}

TEST(BuildGame, UnreachableChargeNamesVehicle) {
  const DemandProfile prof = desk_profile(3, 4);
  PevConfig c = generate_config(3, 4, prof, 2);
  c.gamma[1] = 5.0;
  try {
    build_game(c, prof);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("vehicle 1"), std::string::npos);
  }
  c.gamma[1] = 1.0;
  c.alpha = 0.0;
  EXPECT_THROW(build_game(c, prof), ContractError);
}

TEST(GenerateConfig, RangesAndDeterminism) {
  const DemandProfile prof = desk_profile();
  const PevConfig a = generate_config(5, 8, prof, 42);
  const PevConfig b = generate_config(5, 8, prof, 42);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.gamma, b.gamma);
  for (int i = 0; i < 5; ++i) {
    EXPECT_GE(a.b[i], 0.075);
    EXPECT_LE(a.b[i], 0.25);
    EXPECT_GE(a.s0[i], 0.1);
    EXPECT_LE(a.s0[i], 0.4);
    EXPECT_LE(a.gamma[i], 7.49 * 8 / 24.0);
  }
  EXPECT_DOUBLE_EQ(a.d_max, 2 * prof.d_nom.maxCoeff());
}

TEST(SampleDelta, SupportAndMoments) {
  const DemandProfile prof = desk_profile();
  PevConfig c = generate_config(5, 8, prof, 1);
  EXPECT_EQ(sample_delta(c, prof, 0, 3).size(), 0);
  const Multisample ms = sample_delta(c, prof, 100000, 3);
  for (Index t = 0; t < 8; ++t) {
    const double h = 0.05 * prof.d_nom[t];
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (const auto& d : ms.samples) {
      lo = std::min(lo, d[t]);
      hi = std::max(hi, d[t]);
      sum += d[t];
    }
    EXPECT_GE(lo, -h);
    EXPECT_LE(hi, h);
    const double se = h / std::sqrt(3.0) / std::sqrt(100000.0);
    EXPECT_LE(std::abs(sum / 100000.0), 3 * se);
  }
  c.delta_scale = 0.0;
  for (const auto& d : sample_delta(c, prof, 10, 3).samples) EXPECT_EQ(d, Vector::Zero(8));
  // the program's sampler draws the same stream
  const PevGame g = build_game(generate_config(5, 8, prof, 1), prof);
  EXPECT_EQ(g.program.draw(5, 3).samples[4], sample_delta(generate_config(5, 8, prof, 1), prof, 5, 3).samples[4]);
}

TEST(AggregateReport, LinearityAndFeasibility) {
  const DemandProfile prof = desk_profile(2, 3);
  const PevConfig c = generate_config(2, 3, prof, 5);
  SolutionCloud zero;
  zero.points.push_back(Vector::Zero(6));
  const AggregateReport r0 = aggregate_report(zero, c, prof);
  EXPECT_EQ(r0.sigma_avg, Vector::Zero(3));
  EXPECT_EQ(r0.total_avg, prof.d_nom);

  Vector cvec(6);
  cvec << 0.1, 0.2, 0.3, 0.1, 0.2, 0.3;
  Vector x(6);
  x << 0.0, 0.4, 0.1, 0.2, 0.3, 0.5;
  SolutionCloud two;
  two.points = {x, -x + 2 * cvec};
  const AggregateReport r = aggregate_report(two, c, prof);
  EXPECT_NEAR((r.sigma_avg - 2 * cvec.head(3)).norm(), 0.0, 1e-15);

  std::ostringstream csv_out, svg_out;
  write_report_csv(csv_out, r);
  write_report_svg(svg_out, r);
  EXPECT_EQ(csv_out.str().substr(0, 40), "t,d_nom,sigma_avg,total_avg,capacity,mar");
  EXPECT_NE(svg_out.str().find("<svg"), std::string::npos);
  SolutionCloud bad;
  bad.points.push_back(Vector::Zero(5));
  EXPECT_THROW(aggregate_report(bad, c, prof), ContractError);
}

TEST(Pev, CloudMeetsCapacityAndCharge) {
  const DemandProfile prof = desk_profile();
  const PevConfig c = generate_config(5, 8, prof, 8);
  const PevGame g = build_game(c, prof);
  const Multisample ms = g.program.draw(20, 8);
  const ViProblem P = scenario_problem(g.program, ms, g.mapping);
  const SolutionCloud cloud = solution_cloud(P, 20, 1);
  for (const auto& x : cloud.points) {
    for (const auto& d : ms.samples) {
      const Vector tot = prof.d_nom + d + aggregate(x, 5, 8);
      EXPECT_LE(tot.maxCoeff(), c.d_max + 1e-6);
    }
    for (int i = 0; i < 5; ++i) EXPECT_GE(x.segment(i * 8, 8).sum(), c.gamma[i] - 1e-6);
  }
  EXPECT_LE(aggregate_report(cloud, c, prof).worst_point_peak, c.d_max + 1e-6);
}

} // namespace
} // namespace scenvi::pev
