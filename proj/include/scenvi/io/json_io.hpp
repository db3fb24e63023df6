#pragma once

#include "scenvi/cert/certificate.hpp"
#include "scenvi/io/csv.hpp"
#include "scenvi/pev/pev.hpp"
#include "scenvi/scenario/cloud.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <string>

namespace scenvi::json_io {

using Json = nlohmann::ordered_json;

/// Reals are written as shortest round-trip decimal strings; either strings or numbers are read.
inline Json real(double v) { return csv::format(v); }

inline double to_real(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return csv::parse_real(j.get<std::string>(), 0, where);
  throw ParseError(where + ": expected a real, got " + std::string(j.type_name()));
}

template <class T>
T to_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer, got " + std::string(j.type_name()));
  return j.get<T>();
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline Json vector(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(real(v[i]));
  return a;
}

inline Json matrix(const Matrix& M) {
  Json a = Json::array();
  for (Index r = 0; r < M.rows(); ++r) a.push_back(vector(M.row(r).transpose()));
  return a;
}

inline Vector to_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Index>(i)] = to_real(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix to_matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  if (j.empty()) return Matrix(0, 0);
  const Index cols = static_cast<Index>(j[0].is_array() ? j[0].size() : 0);
  Matrix M(static_cast<Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string w = where + "[" + std::to_string(r) + "]";
    const Vector row = to_vector(j[r], w);
    if (row.size() != cols) throw ParseError(w + ": ragged row, expected " + std::to_string(cols) + " entries");
    M.row(static_cast<Index>(r)) = row.transpose();
  }
  return M;
}

inline Json polytope(const Polytope& P) {
  Json prov = Json::array();
  for (const RowTag& t : P.provenance())
    prov.push_back({{"kind", t.is_sample() ? "sample" : "base"}, {"sample", t.sample}, {"row", t.row}});
  return {{"A", matrix(P.A())}, {"b", vector(P.b())}, {"provenance", prov}};
}

inline Polytope to_polytope(const Json& j, const std::string& where) {
  Matrix A = to_matrix(field(j, "A", where), where + ".A");
  Vector b = to_vector(field(j, "b", where), where + ".b");
  if (A.rows() != b.size()) throw ParseError(where + ": A has " + std::to_string(A.rows()) + " rows but b has " +
                                             std::to_string(b.size()) + " entries");
  if (!j.contains("provenance")) return Polytope(std::move(A), std::move(b));
  const Json& pj = j["provenance"];
  if (!pj.is_array() || pj.size() != static_cast<std::size_t>(A.rows()))
    throw ParseError(where + ".provenance: expected one entry per row");
  std::vector<RowTag> tags;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string w = where + ".provenance[" + std::to_string(i) + "]";
    const Json& kj = field(pj[i], "kind", w);
    const std::string kind = kj.is_string() ? kj.get<std::string>() : std::string();
    if (kind != "base" && kind != "sample") throw ParseError(w + ": kind must be base or sample");
    const int row = to_integer<int>(field(pj[i], "row", w), w + ".row");
    tags.push_back(kind == "base" ? RowTag::base_row(row)
                                  : RowTag::sample_row(to_integer<int>(field(pj[i], "sample", w), w + ".sample"), row));
  }
  return Polytope(std::move(A), std::move(b), std::move(tags));
}

inline Json problem(const ViProblem& P) {
  return {{"M", matrix(P.mapping().M())}, {"q", vector(P.mapping().q())}, {"polytope", polytope(P.feasible())}};
}

inline ViProblem to_problem(const Json& j, const std::string& where) {
  const Matrix M = to_matrix(field(j, "M", where), where + ".M");
  const Vector q = to_vector(field(j, "q", where), where + ".q");
  if (M.rows() != M.cols() || M.rows() != q.size())
    throw ParseError(where + ": M must be square with the length of q");
  return ViProblem(AffineMapping(M, q), to_polytope(field(j, "polytope", where), where + ".polytope"));
}

inline Json certificate(const Certificate& c) {
  Json sup = Json::array();
  for (const int k : c.supporting) sup.push_back(k);
  return {{"K", c.K},
          {"s_K", c.s_K},
          {"v_K", c.v_K},
          {"beta", real(c.beta)},
          {"epsilon", real(c.epsilon)},
          {"mode", to_string(c.mode)},
          {"vacuous", c.vacuous},
          {"supporting", sup},
          {"instance_hash", c.instance_hash},
          {"seed", c.seed},
          {"tool_version", c.tool_version}};
}

inline Json pev_config(const pev::PevConfig& c) {
  return {{"N", c.N},
          {"T", c.T},
          {"alpha", real(c.alpha)},
          {"eta", vector(c.eta)},
          {"b", vector(c.b)},
          {"s0", vector(c.s0)},
          {"gamma", vector(c.gamma)},
          {"d_max", real(c.d_max)},
          {"delta_scale", real(c.delta_scale)},
          {"seed", c.seed}};
}

inline pev::PevConfig to_pev_config(const Json& j, const std::string& where) {
  pev::PevConfig c;
  c.N = to_integer<int>(field(j, "N", where), where + ".N");
  c.T = to_integer<int>(field(j, "T", where), where + ".T");
  c.alpha = to_real(field(j, "alpha", where), where + ".alpha");
  c.eta = to_vector(field(j, "eta", where), where + ".eta");
  c.b = to_vector(field(j, "b", where), where + ".b");
  c.s0 = to_vector(field(j, "s0", where), where + ".s0");
  c.gamma = to_vector(field(j, "gamma", where), where + ".gamma");
  c.d_max = to_real(field(j, "d_max", where), where + ".d_max");
  if (j.contains("delta_scale")) c.delta_scale = to_real(j["delta_scale"], where + ".delta_scale");
  if (j.contains("seed")) c.seed = to_integer<std::uint64_t>(j["seed"], where + ".seed");
  c.validate();
  return c;
}

/// Cloud header: problem hash and the configuration that produced the points.
inline Json cloud_header(const SolutionCloud& c, std::uint64_t seed, const SolverConfig& cfg) {
  return {{"problem_hash", c.problem_hash},
          {"size", c.size()},
          {"restarts", c.restarts},
          {"verified", c.verified},
          {"dedupe_radius", real(c.dedupe_radius)},
          {"seed", seed},
          {"step", real(cfg.step)},
          {"tol", real(cfg.tol)},
          {"max_iter", cfg.max_iter},
          {"tool_version", kToolVersion}};
}

inline void write_cloud_csv(std::ostream& out, const SolutionCloud& c) {
  for (const auto& x : c.points) csv::write_row(out, x);
}

/// Parses a JSON file; a missing file or malformed text is a ParseError naming the path.
inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

} // namespace scenvi::json_io
