#pragma once

#include "scenvi/cert/certificate.hpp"
#include "scenvi/experiments/violation.hpp"
#include "scenvi/io/csv.hpp"
#include "scenvi/pev/pev.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace scenvi {

struct Table2Options {
  std::vector<Index> Ks{0, 10, 50, 100};
  double beta = 1e-6;
  int repetitions = 5;
  Index fresh = 2000;
  int restarts = 50;
  std::uint64_t seed = 0;
  EpsilonMode mode = EpsilonMode::split;
  SolverConfig solver;
};

struct Table2Row {
  Index K = 0;
  Index A_K = 0;
  Index s_K = 0;
  double epsilon = 1.0;
  bool vacuous = false;
  ViolationReport violation;
  double shrinkage = 1.0;  // share of the K = 0 cloud inside X_{delta_K}
  std::size_t cloud_size = 0;
  std::string error;       // nonempty when the row aborted

  bool ok() const { return error.empty(); }
};

/// Nested multisamples: the K-row uses the first K draws of one seeded stream.
inline std::vector<Table2Row> run_table2_experiment(const pev::PevGame& game, const Table2Options& opt,
                                                    std::ostream* log = nullptr) {
  require(!opt.Ks.empty(), "run_table2_experiment: empty K list");
  require(opt.repetitions >= 1 && opt.fresh >= 1 && opt.restarts >= 1,
          "run_table2_experiment: repetitions, fresh and restarts must be at least 1");
  for (const Index K : opt.Ks) require(K >= 0, "run_table2_experiment: K must be nonnegative");
  const Index Kmax = *std::max_element(opt.Ks.begin(), opt.Ks.end());
  const Multisample all = game.program.draw(Kmax, opt.seed);

  const ViProblem base(game.mapping, game.program.base());
  const SolutionCloud cloud0 = solution_cloud(base, opt.restarts, derive_seed(opt.seed, 0xC10D0ULL), opt.solver);

  std::vector<Table2Row> rows;
  for (const Index K : opt.Ks) {
    Table2Row row;
    row.K = K;
    try {
      const Multisample ms = all.prefix(K);
      const Certificate c = certify(game.program, ms, game.mapping, opt.beta, opt.mode, opt.solver);
      row.A_K = c.v_K;
      row.s_K = c.s_K;
      row.epsilon = c.epsilon;
      row.vacuous = c.vacuous;
      const Polytope X = K == 0 ? game.program.base() : minimal_representation(assemble(game.program, ms)).reduced;
      const ViProblem P(game.mapping, X);
      const SolutionCloud cloud =
          K == 0 ? cloud0
                 : solution_cloud(P, opt.restarts, derive_seed(opt.seed, 0xC10D0ULL + static_cast<std::uint64_t>(K)),
                                  opt.solver);
      row.cloud_size = cloud.size();
      row.violation = estimate_violation(cloud, game.program, opt.fresh,
                                         derive_seed(opt.seed, 0x7AB1E2ULL + static_cast<std::uint64_t>(K)),
                                         opt.repetitions, row.epsilon);
      std::size_t inside = 0;
      for (const auto& x : cloud0.points)
        if (contains(X, x, 1e-6)) ++inside;
      row.shrinkage = static_cast<double>(inside) / static_cast<double>(cloud0.size());
    } catch (const std::exception& e) {
      row.error = e.what();
      if (log) *log << "table2: row K=" << K << " aborted: " << e.what() << '\n';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_table2_csv(std::ostream& out, const std::vector<Table2Row>& rows) {
  out << "K,A_K,s_K,epsilon,v_max,v_avg,bound_held,shrinkage,cloud_size,vacuous,status\n";
  for (const auto& r : rows) {
    out << r.K << ',';
    if (!r.ok()) {
      out << ",,,,,,,,," << "error\n";
      continue;
    }
    out << r.A_K << ',' << r.s_K << ',' << csv::format(r.epsilon) << ',' << csv::format(r.violation.v_max) << ','
        << csv::format(r.violation.v_avg) << ',' << (r.violation.all_held() ? "true" : "false") << ','
        << csv::format(r.shrinkage) << ',' << r.cloud_size << ',' << (r.vacuous ? "true" : "false") << ",ok\n";
  }
}

} // namespace scenvi
