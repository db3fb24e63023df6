#pragma once

#include "scenvi/io/csv.hpp"
#include "scenvi/scenario/cloud.hpp"
#include "scenvi/scenario/program.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace scenvi::pev {

struct PevConfig {
  int N = 5;
  int T = 8;
  double alpha = 0.01;
  Vector eta;    // length T
  Vector b;      // charging efficiency per vehicle
  Vector s0;     // initial state of charge per vehicle
  Vector gamma;  // required charge per vehicle
  double d_max = 0.0;
  double delta_scale = 0.05;
  std::uint64_t seed = 0;

  void validate() const {
    require(N >= 1 && T >= 1, "PevConfig: N and T must be at least 1");
    require(alpha > 0.0, "PevConfig: alpha must be positive");
    require(eta.size() == T, "PevConfig: eta must have length T");
    require(b.size() == N && s0.size() == N && gamma.size() == N,
            "PevConfig: b, s0 and gamma must have one entry per vehicle");
    for (int i = 0; i < N; ++i) {
      require(b[i] > 0.0, "PevConfig: efficiency of vehicle " + std::to_string(i) + " must be positive");
      require(s0[i] >= 0.0 && s0[i] <= 1.0, "PevConfig: s0 of vehicle " + std::to_string(i) + " outside [0,1]");
      require(gamma[i] >= 0.0, "PevConfig: gamma of vehicle " + std::to_string(i) + " is negative");
    }
    require(d_max > 0.0, "PevConfig: d_max must be positive");
    require(delta_scale >= 0.0, "PevConfig: delta_scale must be nonnegative");
  }
};

struct DemandProfile {
  Vector d_nom;

  Index T() const { return d_nom.size(); }
};

/// Column-wise mean of a CSV with one T-column profile per row.
inline DemandProfile average_profiles(const csv::Table& table, Index T, const std::string& source) {
  require(T >= 1, "load_demand_profiles: T must be at least 1");
  if (table.rows.empty()) throw ParseError(source + ": no profile rows");
  Vector sum = Vector::Zero(T);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = source + ":" + std::to_string(table.line[r]);
    if (static_cast<Index>(row.size()) != T)
      throw ParseError(where + ": expected " + std::to_string(T) + " columns, found " + std::to_string(row.size()));
    for (Index t = 0; t < T; ++t) {
      const double v = row[static_cast<std::size_t>(t)];
      if (!std::isfinite(v) || v < 0.0) throw ParseError(where + ": negative or non-finite demand in column " + std::to_string(t));
      sum[t] += v;
    }
  }
  return {sum / static_cast<double>(table.rows.size())};
}

inline DemandProfile load_demand_profiles(const std::string& path, Index T) {
  return average_profiles(csv::read_file(path), T, path);
}

/// Evening-peaked daily shape scaled so the peak is about 0.6 N; slot t covers hours [24t/T, 24(t+1)/T).
inline Vector synthetic_base_profile(int N, int T) {
  Vector d(T);
  for (int t = 0; t < T; ++t) {
    const double h = (t + 0.5) * 24.0 / T;
    d[t] = N * (0.35 + 0.25 * std::exp(-std::pow((h - 19.0) / 3.0, 2)) + 0.08 * std::exp(-std::pow((h - 9.0) / 2.5, 2)));
  }
  return d;
}

/// `rows` noisy daily profiles around the synthetic base (3% multiplicative Gaussian noise).
inline std::vector<Vector> synthetic_profiles(int N, int T, int rows, std::uint64_t seed) {
  const Vector base = synthetic_base_profile(N, T);
  std::vector<Vector> out;
  for (int r = 0; r < rows; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Vector d = base;
    for (int t = 0; t < T; ++t) d[t] = std::max(0.0, d[t] * (1.0 + 0.03 * rng.normal()));
    out.push_back(d);
  }
  return out;
}

/// Vehicle parameters drawn uniformly from fixed ranges: b in [0.075, 0.25],
/// s0 in [0.1, 0.4], gamma in [1.62, 7.49] scaled by T/24 and capped at
/// 0.9 min(T, (1 - s0)/b) so every vehicle can meet its target. d_max = 2 max d_nom.
inline PevConfig generate_config(int N, int T, const DemandProfile& profile, std::uint64_t seed) {
  require(N >= 1 && T >= 1, "generate_config: N and T must be at least 1");
  require(profile.T() == T, "generate_config: profile length differs from T");
  PevConfig c;
  c.N = N;
  c.T = T;
  c.eta = Vector::Zero(T);
  c.b.resize(N);
  c.s0.resize(N);
  c.gamma.resize(N);
  for (int i = 0; i < N; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    c.b[i] = rng.uniform(0.075, 0.25);
    c.s0[i] = rng.uniform(0.1, 0.4);
    const double g = rng.uniform(1.62, 7.49) * T / 24.0;
    c.gamma[i] = std::min(g, 0.9 * std::min<double>(T, (1.0 - c.s0[i]) / c.b[i]));
  }
  c.d_max = 2.0 * profile.d_nom.maxCoeff();
  c.seed = seed;
  return c;
}

struct PevGame {
  ScenarioProgram program;
  AffineMapping mapping;
};

/// delta_t uniform in [-scale d_nom(t), +scale d_nom(t)].
inline Sampler delta_sampler(const PevConfig& cfg, const DemandProfile& profile) {
  const Vector half = cfg.delta_scale * profile.d_nom;
  return [half](Rng& rng) {
    Vector d(half.size());
    for (Index t = 0; t < half.size(); ++t) d[t] = half[t] * (2.0 * rng.uniform() - 1.0);
    return d;
  };
}

/// Base rows per vehicle i (decision x_i occupies columns iT..iT+T-1):
/// -x_i <= 0, x_i <= 1, -B_i x_i <= s0_i 1, B_i x_i <= (1 - s0_i) 1, -1^T x_i <= -gamma_i.
/// Each sample adds the T coupling rows sigma(x) <= d_max 1 - d_nom - delta.
inline PevGame build_game(const PevConfig& cfg, const DemandProfile& profile) {
  cfg.validate();
  require(profile.T() == cfg.T, "build_game: profile has length " + std::to_string(profile.T()) + ", expected T = " +
                                    std::to_string(cfg.T));
  require((profile.d_nom.array() >= 0.0).all(), "build_game: negative nominal demand");
  const Index N = cfg.N, T = cfg.T, n = N * T, per = 4 * T + 1;
  for (Index i = 0; i < N; ++i) {
    const double reach = std::min<double>(static_cast<double>(T), (1.0 - cfg.s0[i]) / cfg.b[i]);
    if (cfg.gamma[i] > reach + 1e-12)
      throw ContractError("build_game: vehicle " + std::to_string(i) + " cannot reach gamma = " +
                          std::to_string(cfg.gamma[i]) + " (at most " + std::to_string(reach) + " within " +
                          std::to_string(T) + " slots)");
  }

  Matrix A = Matrix::Zero(N * per, n);
  Vector b(N * per);
  for (Index i = 0; i < N; ++i) {
    const Index r0 = i * per, c0 = i * T;
    for (Index t = 0; t < T; ++t) {
      A(r0 + t, c0 + t) = -1.0;
      b[r0 + t] = 0.0;
      A(r0 + T + t, c0 + t) = 1.0;
      b[r0 + T + t] = 1.0;
      for (Index s = 0; s <= t; ++s) {
        A(r0 + 2 * T + t, c0 + s) = -cfg.b[i];
        A(r0 + 3 * T + t, c0 + s) = cfg.b[i];
      }
      b[r0 + 2 * T + t] = cfg.s0[i];
      b[r0 + 3 * T + t] = 1.0 - cfg.s0[i];
      A(r0 + 4 * T, c0 + t) = -1.0;
    }
    b[r0 + 4 * T] = -cfg.gamma[i];
  }

  Matrix C = Matrix::Zero(T, n);
  for (Index i = 0; i < N; ++i) C.middleCols(i * T, T) = Matrix::Identity(T, T);
  const Vector cap = Vector::Constant(T, cfg.d_max) - profile.d_nom;
  auto rule = [C, cap](const Vector& delta) { return SampleBlock{C, cap - delta}; };

  Vector q(n);
  for (Index i = 0; i < N; ++i) q.segment(i * T, T) = cfg.eta;
  return {ScenarioProgram(Polytope(std::move(A), std::move(b)), rule, T, T, delta_sampler(cfg, profile)),
          AffineMapping(Matrix::Constant(n, n, cfg.alpha), std::move(q))};
}

inline Multisample sample_delta(const PevConfig& cfg, const DemandProfile& profile, Index K, std::uint64_t seed) {
  require(profile.T() == cfg.T, "sample_delta: profile length differs from T");
  const Sampler draw = delta_sampler(cfg, profile);
  Multisample ms{{}, seed};
  for (Index k = 0; k < K; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    ms.samples.push_back(draw(rng));
  }
  return ms;
}

/// sigma(x) = sum_i x_i.
inline Vector aggregate(const Vector& x, int N, int T) {
  require(x.size() == static_cast<Index>(N) * T, "aggregate: point has length " + std::to_string(x.size()) +
                                                     ", expected N T = " + std::to_string(N * T));
  Vector s = Vector::Zero(T);
  for (int i = 0; i < N; ++i) s += x.segment(static_cast<Index>(i) * T, T);
  return s;
}

struct AggregateReport {
  Vector d_nom;
  Vector sigma_avg;
  Vector total_avg;        // d_nom + sigma_avg
  Vector capacity_margin;  // d_max - total_avg
  double d_max = 0.0;
  double peak_total = 0.0;      // max_t total_avg
  double worst_point_peak = 0.0;  // max over cloud points and slots of d_nom + sigma(x)
};

inline AggregateReport aggregate_report(const SolutionCloud& cloud, const PevConfig& cfg, const DemandProfile& profile) {
  require(!cloud.empty(), "aggregate_report: cloud is empty");
  require(profile.T() == cfg.T, "aggregate_report: profile length differs from T");
  AggregateReport r;
  r.d_nom = profile.d_nom;
  r.d_max = cfg.d_max;
  r.sigma_avg = Vector::Zero(cfg.T);
  r.worst_point_peak = -std::numeric_limits<double>::infinity();
  for (const auto& x : cloud.points) {
    const Vector s = aggregate(x, cfg.N, cfg.T);
    r.sigma_avg += s;
    r.worst_point_peak = std::max(r.worst_point_peak, (profile.d_nom + s).maxCoeff());
  }
  r.sigma_avg /= static_cast<double>(cloud.size());
  r.total_avg = profile.d_nom + r.sigma_avg;
  r.capacity_margin = Vector::Constant(cfg.T, cfg.d_max) - r.total_avg;
  r.peak_total = r.total_avg.maxCoeff();
  return r;
}

inline void write_report_csv(std::ostream& out, const AggregateReport& r) {
  out << "t,d_nom,sigma_avg,total_avg,capacity,margin\n";
  for (Index t = 0; t < r.d_nom.size(); ++t)
    out << t << ',' << csv::format(r.d_nom[t]) << ',' << csv::format(r.sigma_avg[t]) << ','
        << csv::format(r.total_avg[t]) << ',' << csv::format(r.d_max) << ',' << csv::format(r.capacity_margin[t])
        << '\n';
}

/// Line chart of d_nom, total demand and capacity over the horizon.
inline void write_report_svg(std::ostream& out, const AggregateReport& r) {
  const double W = 640, H = 360, pad = 40;
  const Index T = r.d_nom.size();
  const double ymax = 1.1 * std::max({r.d_max, r.total_avg.maxCoeff(), 1e-12});
  auto X = [&](Index t) { return pad + (W - 2 * pad) * (T > 1 ? static_cast<double>(t) / (T - 1) : 0.5); };
  auto Y = [&](double v) { return H - pad - (H - 2 * pad) * v / ymax; };
  auto polyline = [&](const Vector& v, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (Index t = 0; t < T; ++t) out << (t ? " " : "") << csv::format(X(t)) << ',' << csv::format(Y(v[t]));
    out << "\"/>\n";
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
      << "\" stroke=\"black\"/>\n";
  polyline(Vector::Constant(T, r.d_max), "red");
  polyline(r.d_nom, "gray");
  polyline(r.total_avg, "blue");
  out << "<text x=\"" << W - pad - 150 << "\" y=\"" << pad - 10 << "\" font-size=\"12\">"
      << "red: d_max, gray: d_nom, blue: total</text>\n";
  out << "</svg>\n";
}

} // namespace scenvi::pev
