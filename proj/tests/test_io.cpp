#include "fixtures.hpp"

#include "scenvi/io/json_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace scenvi {
namespace {

using json_io::Json;

TEST(JsonIo, PolytopeRoundTripIsExact) {
  Rng rng(11);
  Matrix A(4, 3);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = rng.normal() / 3.0;
  Vector b = Vector::Constant(4, 0.1 + 1.0 / 7.0);
  const Polytope P(A, b, {RowTag::base_row(0), RowTag::base_row(1), RowTag::sample_row(0, 0), RowTag::sample_row(2, 1)});
  const Json j = json_io::polytope(P);
  const Polytope Q = json_io::to_polytope(Json::parse(j.dump()), "p");
  EXPECT_EQ(Q.A(), P.A());
  EXPECT_EQ(Q.b(), P.b());
  EXPECT_EQ(Q.provenance(), P.provenance());
  EXPECT_TRUE(j["b"][0].is_string());
  EXPECT_EQ(j["provenance"][3]["kind"], "sample");
}

TEST(JsonIo, NumbersAcceptedAndProvenanceOptional) {
  const Json j = Json::parse(R"({"A": [[1, 0], [0, 1], [-1, -1]], "b": [1, "1", 0]})");
  const Polytope P = json_io::to_polytope(j, "p");
  EXPECT_EQ(P.rows(), 3);
  EXPECT_EQ(P.b()[1], 1.0);
  EXPECT_FALSE(P.provenance()[2].is_sample());
}

TEST(JsonIo, MalformedInputNamesTheField) {
  auto message = [](const char* text) {
    try {
      json_io::to_polytope(Json::parse(text), "p");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"b": [1]})").find("missing field 'A'"), std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, 0], [1]], "b": [1, 2]})").find("p.A[1]"), std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "b": [1, 2]})").find("1 rows"), std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "b": ["x"]})").find("not a number"), std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "b": [1], "provenance": [{"kind": "other", "row": 0}]})").find("kind"),
            std::string::npos);
  EXPECT_THROW(json_io::read_file("/nonexistent/p.json"), ParseError);
}

TEST(JsonIo, ProblemRoundTrip) {
  const ViProblem P = fixture::triangle_problem(3);
  const ViProblem Q = json_io::to_problem(Json::parse(json_io::problem(P).dump()), "p");
  EXPECT_EQ(Q.hash(), P.hash());
  EXPECT_THROW(json_io::to_problem(Json::parse(R"({"M": [[1, 0]], "q": [0, 0], "polytope": {"A": [[1, 0]], "b": [1]}})"),
                                   "p"),
               ParseError);
}

TEST(JsonIo, CertificateFields) {
  const Certificate c = certify(fixture::triangle_program(), fixture::triangle_samples(3), fixture::triangle_mapping(), 0.1);
  const Json j = json_io::certificate(c);
  for (const char* k : {"K", "s_K", "beta", "epsilon", "mode", "instance_hash", "seed", "tool_version"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["K"], 3);
  EXPECT_EQ(j["s_K"], 1);
  EXPECT_EQ(json_io::to_real(j["epsilon"], "e"), c.epsilon);
  EXPECT_EQ(j["mode"], "split");
}

TEST(JsonIo, PevConfigRoundTrip) {
  const pev::DemandProfile prof{pev::synthetic_base_profile(3, 4)};
  const pev::PevConfig c = pev::generate_config(3, 4, prof, 5);
  const pev::PevConfig d = json_io::to_pev_config(Json::parse(json_io::pev_config(c).dump()), "c");
  EXPECT_EQ(d.N, c.N);
  EXPECT_EQ(d.b, c.b);
  EXPECT_EQ(d.gamma, c.gamma);
  EXPECT_EQ(d.d_max, c.d_max);
  EXPECT_EQ(d.seed, c.seed);
  Json bad = json_io::pev_config(c);
  bad["N"] = "3";
  EXPECT_THROW(json_io::to_pev_config(bad, "c"), ParseError);
  bad = json_io::pev_config(c);
  bad["b"] = Json::array({"0.1"});
  EXPECT_THROW(json_io::to_pev_config(bad, "c"), ContractError);
}

TEST(JsonIo, CloudExport) {
  const ViProblem P = fixture::triangle_problem(3);
  const SolutionCloud cloud = solution_cloud(P, 4, 1);
  const Json h = json_io::cloud_header(cloud, 1, SolverConfig{}.resolved(P));
  EXPECT_EQ(h["problem_hash"], P.hash());
  EXPECT_EQ(h["size"], cloud.size());
  std::ostringstream out;
  json_io::write_cloud_csv(out, cloud);
  std::istringstream in(out.str());
  const csv::Table t = csv::read(in);
  ASSERT_EQ(t.rows.size(), cloud.size());
  EXPECT_EQ(t.rows[0][0], cloud.points[0][0]);
}

} // namespace
} // namespace scenvi
