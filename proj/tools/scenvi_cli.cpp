#include "scenvi/experiments/table2.hpp"
#include "scenvi/io/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace scenvi;
using json_io::Json;
namespace fs = std::filesystem;

enum class Format { json, csv };

// Relative output paths land in SCENVI_OUT_DIR when it is set.
fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  if (p.is_relative())
    if (const char* dir = std::getenv("SCENVI_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  return p;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    const fs::path p = resolve_out(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    file_.open(p);
    if (!file_) throw ContractError("cannot write " + p.string());
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

struct SolverFlags {
  double step = 0.0;
  double tol = 1e-6;
  int max_iter = -1;

  void add(CLI::App* app) {
    app->add_option("--step", step, "Extragradient step (default 0.9/L)");
    app->add_option("--tol", tol, "Natural-residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter, "Iteration cap (default 50n + 10000)");
  }
  SolverConfig config() const { return {step, tol, max_iter}; }
};

// The uncertain program a command operates on: explicit halfspace samples over a base
// problem, or the PEV game with drawn demand perturbations.
struct ProgramFlags {
  std::string problem;
  std::string samples;
  long long rows_per_sample = 1;
  std::string pev_config;
  std::string profile;
  std::optional<long long> draw;

  void add(CLI::App* app, bool need_distribution) {
    app->add_option("--problem", problem, "ViProblem JSON (base polytope and mapping)");
    if (!need_distribution) {
      app->add_option("--samples", samples, "Multisample CSV, one flattened [A | b] block per row");
      app->add_option("--rows-per-sample", rows_per_sample, "Constraint rows per sample")->check(CLI::PositiveNumber);
    }
    app->add_option("--pev-config", pev_config, "PEV configuration JSON");
    app->add_option("--profile", profile, "Demand profile CSV (one T-column row per day)");
    app->add_option("--draw", draw, "Draw K samples from the program's distribution")->check(CLI::NonNegativeNumber);
  }

  bool is_pev() const { return !pev_config.empty(); }

  struct Loaded {
    ScenarioProgram program;
    AffineMapping mapping;
    Multisample samples;
  };

  Loaded load(std::uint64_t seed) const {
    if (is_pev()) {
      require(problem.empty() && samples.empty(), "--pev-config excludes --problem and --samples");
      require(!profile.empty(), "--pev-config needs --profile");
      require(draw.has_value(), "--pev-config needs --draw K");
      const pev::PevConfig cfg = json_io::to_pev_config(json_io::read_file(pev_config), pev_config);
      const pev::DemandProfile prof = pev::load_demand_profiles(profile, cfg.T);
      pev::PevGame g = pev::build_game(cfg, prof);
      Multisample ms = g.program.draw(*draw, seed);
      return {std::move(g.program), std::move(g.mapping), std::move(ms)};
    }
    require(!problem.empty(), "need --problem or --pev-config");
    const ViProblem P = json_io::to_problem(json_io::read_file(problem), problem);
    ScenarioProgram prog = ScenarioProgram::explicit_halfspaces(P.feasible(), rows_per_sample);
    require(!draw.has_value(), "--draw needs a sampling distribution; explicit programs take --samples");
    Multisample ms{{}, seed};
    if (!samples.empty()) {
      const csv::Table t = csv::read_file(samples);
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (static_cast<Index>(t.rows[r].size()) != prog.ell())
          throw ParseError(samples + ":" + std::to_string(t.line[r]) + ": expected " + std::to_string(prog.ell()) +
                           " columns, found " + std::to_string(t.rows[r].size()));
        ms.samples.push_back(Eigen::Map<const Vector>(t.rows[r].data(), prog.ell()));
      }
    }
    return {std::move(prog), P.mapping(), std::move(ms)};
  }
};

Polytope scenario_polytope(const ProgramFlags::Loaded& L) {
  return L.samples.empty() ? L.program.base() : minimal_representation(assemble(L.program, L.samples)).reduced;
}

void write_cloud(std::ostream& out, Format fmt, const SolutionCloud& cloud, std::uint64_t seed, const SolverConfig& cfg) {
  const Json header = json_io::cloud_header(cloud, seed, cfg);
  if (fmt == Format::csv) {
    out << "# " << header.dump() << '\n';
    json_io::write_cloud_csv(out, cloud);
    return;
  }
  Json pts = Json::array();
  for (const auto& x : cloud.points) pts.push_back(json_io::vector(x));
  out << Json{{"header", header}, {"points", pts}}.dump(2) << '\n';
}

Json violation_json(const ViolationReport& r) {
  Json reps = Json::array(), held = Json::array();
  for (const double v : r.repetitions) reps.push_back(json_io::real(v));
  for (const bool b : r.bound_held) held.push_back(b);
  return {{"fresh_count", r.fresh_count},  {"violated_count", r.violated_count},
          {"v_hat", json_io::real(r.v_hat)}, {"v_max", json_io::real(r.v_max)},
          {"v_avg", json_io::real(r.v_avg)}, {"epsilon_used", json_io::real(r.epsilon_used)},
          {"repetitions", reps},            {"bound_held", held}};
}

void add_format(CLI::App* app, Format& fmt) {
  app->add_option("--format", fmt, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"json", Format::json}, {"csv", Format::csv}}))
      ->option_text("json|csv");
}

void mode_option(CLI::App* app, std::string& mode) {
  app->add_option("--mode", mode, "Epsilon schedule: split or wj");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario variational inequalities with probabilistic certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::uint64_t seed = 0;
  std::string out_path;
  SolverFlags solver;
  ProgramFlags prog;
  std::string mode = "split";
  double beta = 1e-6;

  auto* solve = app.add_subcommand("solve", "Multi-start solution cloud of a VI");
  Format solve_fmt = Format::json;
  int restarts = 1;
  solve->add_option("--problem", prog.problem, "ViProblem JSON")->required();
  solve->add_option("--samples", prog.samples, "Multisample CSV added to the problem's polytope");
  solve->add_option("--rows-per-sample", prog.rows_per_sample, "Constraint rows per sample")->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "Random seed")->required();
  solve->add_option("--restarts", restarts, "Extragradient restarts")->check(CLI::PositiveNumber);
  solve->add_option("--out", out_path, "Output file (default stdout)");
  solver.add(solve);
  add_format(solve, solve_fmt);

  auto* certify_cmd = app.add_subcommand("certify", "Support cardinality and epsilon certificate");
  Format cert_fmt = Format::json;
  prog.add(certify_cmd, false);
  certify_cmd->add_option("--seed", seed, "Random seed")->required();
  certify_cmd->add_option("--beta", beta, "Confidence parameter in (0,1)");
  mode_option(certify_cmd, mode);
  certify_cmd->add_option("--out", out_path, "Output file (default stdout)");
  solver.add(certify_cmd);
  add_format(certify_cmd, cert_fmt);

  auto* violation = app.add_subcommand("violation", "Empirical violation of the solution cloud on fresh draws");
  Format viol_fmt = Format::json;
  Index fresh = 2000;
  int repetitions = 5;
  int viol_restarts = 50;
  prog.add(violation, true);
  violation->add_option("--seed", seed, "Random seed")->required();
  violation->add_option("--beta", beta, "Confidence parameter in (0,1)");
  mode_option(violation, mode);
  violation->add_option("--fresh", fresh, "Fresh draws per repetition")->check(CLI::PositiveNumber);
  violation->add_option("--repetitions", repetitions, "Independent repetitions")->check(CLI::PositiveNumber);
  violation->add_option("--restarts", viol_restarts, "Cloud restarts")->check(CLI::PositiveNumber);
  violation->add_option("--out", out_path, "Output file (default stdout)");
  solver.add(violation);
  add_format(violation, viol_fmt);

  auto* eps_table = app.add_subcommand("epsilon-table", "Epsilon for every support size h = 0..K");
  Format eps_fmt = Format::csv;
  long long K = 0;
  eps_table->add_option("--K", K, "Number of samples")->required()->check(CLI::PositiveNumber);
  eps_table->add_option("--beta", beta, "Confidence parameter in (0,1)");
  mode_option(eps_table, mode);
  eps_table->add_option("--out", out_path, "Output file (default stdout)");
  add_format(eps_table, eps_fmt);

  auto* pev_gen = app.add_subcommand("pev-gen", "Synthetic demand profiles and a PEV configuration");
  int N = 5, T = 8, rows = 100;
  std::string out_dir;
  pev_gen->add_option("--N", N, "Vehicles")->check(CLI::PositiveNumber);
  pev_gen->add_option("--T", T, "Time slots")->check(CLI::PositiveNumber);
  pev_gen->add_option("--rows", rows, "Daily profiles")->check(CLI::PositiveNumber);
  pev_gen->add_option("--seed", seed, "Random seed")->required();
  pev_gen->add_option("--out-dir", out_dir, "Directory for profiles.csv and config.json");

  auto* report = app.add_subcommand("report", "Aggregate charging report of the PEV solution cloud");
  std::string svg_path;
  int report_restarts = 50;
  prog.add(report, true);
  report->add_option("--seed", seed, "Random seed")->required();
  report->add_option("--restarts", report_restarts, "Cloud restarts")->check(CLI::PositiveNumber);
  report->add_option("--svg", svg_path, "Write a line chart to this path");
  report->add_option("--out", out_path, "Report CSV (default stdout)");
  solver.add(report);

  auto* table2 = app.add_subcommand("table2", "Certificates and empirical violation over a list of K");
  Table2Options t2;
  prog.add(table2, true);
  table2->add_option("--K", t2.Ks, "Sample counts")->delimiter(',');
  table2->add_option("--seed", seed, "Random seed")->required();
  table2->add_option("--beta", beta, "Confidence parameter in (0,1)");
  mode_option(table2, mode);
  table2->add_option("--repetitions", t2.repetitions, "Independent repetitions")->check(CLI::PositiveNumber);
  table2->add_option("--fresh", t2.fresh, "Fresh draws per repetition")->check(CLI::PositiveNumber);
  table2->add_option("--restarts", t2.restarts, "Cloud restarts")->check(CLI::PositiveNumber);
  table2->add_option("--out", out_path, "Output CSV (default stdout)");
  solver.add(table2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const EpsilonMode emode = parse_epsilon_mode(mode);
    const SolverConfig cfg = solver.config();

    if (solve->parsed()) {
      const ProgramFlags::Loaded L = prog.load(seed);
      const ViProblem P(L.mapping, scenario_polytope(L));
      const SolutionCloud cloud = solution_cloud(P, restarts, seed, cfg);
      Output out(out_path);
      write_cloud(out.stream(), solve_fmt, cloud, seed, cfg.resolved(P));
    } else if (certify_cmd->parsed()) {
      const ProgramFlags::Loaded L = prog.load(seed);
      const Certificate c = certify(L.program, L.samples, L.mapping, beta, emode, cfg);
      Output out(out_path);
      if (cert_fmt == Format::json) {
        out.stream() << json_io::certificate(c).dump(2) << '\n';
      } else {
        out.stream() << "K,s_K,v_K,beta,epsilon,mode,vacuous,instance_hash,seed,tool_version\n"
                     << c.K << ',' << c.s_K << ',' << c.v_K << ',' << csv::format(c.beta) << ','
                     << csv::format(c.epsilon) << ',' << to_string(c.mode) << ',' << (c.vacuous ? "true" : "false")
                     << ',' << c.instance_hash << ',' << c.seed << ',' << c.tool_version << '\n';
      }
    } else if (violation->parsed()) {
      const ProgramFlags::Loaded L = prog.load(seed);
      require(L.program.has_sampler(), "violation needs a sampling distribution (--pev-config)");
      const Certificate c = certify(L.program, L.samples, L.mapping, beta, emode, cfg);
      const ViProblem P(L.mapping, scenario_polytope(L));
      const SolutionCloud cloud = solution_cloud(P, viol_restarts, derive_seed(seed, 0xC10D0ULL), cfg);
      const ViolationReport r = estimate_violation(cloud, L.program, fresh, seed, repetitions, c.epsilon);
      Output out(out_path);
      if (viol_fmt == Format::json) {
        Json j = violation_json(r);
        j["certificate"] = json_io::certificate(c);
        j["cloud_size"] = cloud.size();
        out.stream() << j.dump(2) << '\n';
      } else {
        out.stream() << "repetition,v_hat,epsilon,bound_held\n";
        for (std::size_t i = 0; i < r.repetitions.size(); ++i)
          out.stream() << i << ',' << csv::format(r.repetitions[i]) << ',' << csv::format(r.epsilon_used) << ','
                       << (r.bound_held[i] ? "true" : "false") << '\n';
      }
    } else if (eps_table->parsed()) {
      require(beta > 0.0 && beta < 1.0, "--beta must lie in (0, 1)");
      Output out(out_path);
      if (eps_fmt == Format::csv) {
        out.stream() << "h,epsilon\n";
        for (long long h = 0; h <= K; ++h)
          out.stream() << h << ',' << csv::format(epsilon_for(emode, K, h, beta)) << '\n';
      } else {
        Json eps = Json::array();
        for (long long h = 0; h <= K; ++h) eps.push_back(json_io::real(epsilon_for(emode, K, h, beta)));
        out.stream() << Json{{"K", K}, {"beta", json_io::real(beta)}, {"mode", to_string(emode)}, {"epsilon", eps}}.dump(2)
                     << '\n';
      }
    } else if (pev_gen->parsed()) {
      const fs::path dir = (out_dir.empty() ? resolve_out(".") : resolve_out(out_dir)).lexically_normal();
      fs::create_directories(dir);
      const std::vector<Vector> days = pev::synthetic_profiles(N, T, rows, seed);
      std::ofstream prof(dir / "profiles.csv");
      for (int t = 0; t < T; ++t) prof << (t ? "," : "") << 't' << t;
      prof << '\n';
      for (const auto& d : days) csv::write_row(prof, d);
      Vector mean = Vector::Zero(T);
      for (const auto& d : days) mean += d;
      const pev::DemandProfile avg{mean / static_cast<double>(rows)};
      const pev::PevConfig c = pev::generate_config(N, T, avg, derive_seed(seed, 0xC0F1ULL));
      std::ofstream(dir / "config.json") << json_io::pev_config(c).dump(2) << '\n';
      std::cout << (dir / "profiles.csv").string() << '\n' << (dir / "config.json").string() << '\n';
    } else if (report->parsed()) {
      require(prog.is_pev(), "report needs --pev-config");
      const ProgramFlags::Loaded L = prog.load(seed);
      const pev::PevConfig pc = json_io::to_pev_config(json_io::read_file(prog.pev_config), prog.pev_config);
      const pev::DemandProfile prof = pev::load_demand_profiles(prog.profile, pc.T);
      const ViProblem P(L.mapping, scenario_polytope(L));
      const SolutionCloud cloud = solution_cloud(P, report_restarts, derive_seed(seed, 0xC10D0ULL), cfg);
      const pev::AggregateReport r = pev::aggregate_report(cloud, pc, prof);
      Output out(out_path);
      pev::write_report_csv(out.stream(), r);
      if (!svg_path.empty()) {
        Output svg(svg_path);
        pev::write_report_svg(svg.stream(), r);
      }
    } else if (table2->parsed()) {
      require(prog.is_pev() && !prog.profile.empty(), "table2 needs --pev-config and --profile");
      const pev::PevConfig pc = json_io::to_pev_config(json_io::read_file(prog.pev_config), prog.pev_config);
      const pev::PevGame game = pev::build_game(pc, pev::load_demand_profiles(prog.profile, pc.T));
      t2.beta = beta;
      t2.seed = seed;
      t2.mode = emode;
      t2.solver = cfg;
      const auto table = run_table2_experiment(game, t2, &std::cerr);
      Output out(out_path);
      write_table2_csv(out.stream(), table);
    }
    return 0;
  } catch (const NumericalFailure& e) {
    std::cerr << "scenvi: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "scenvi: parse error: " << e.what() << '\n';
    return 1;
  } catch (const ContractError& e) {
    std::cerr << "scenvi: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "scenvi: " << e.what() << '\n';
    return 1;
  }
}
