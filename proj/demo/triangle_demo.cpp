// Triangle VI with three sampled halfspaces: solution sets, support samples and certificates.

#include "scenvi/cert/certificate.hpp"
#include "scenvi/scenario/cloud.hpp"

#include <cstdio>

using namespace scenvi;

int main() {
  Matrix A(3, 2);
  A << 0, -1, -2, 1, 2, 1;
  const Polytope triangle(A, (Vector(3) << 0, 0, 2).finished());
  const ScenarioProgram prog = ScenarioProgram::explicit_halfspaces(triangle, 1);
  const AffineMapping F(Matrix::Zero(2, 2), (Vector(2) << 0, 1).finished());

  Multisample all;
  all.samples = {(Vector(3) << -1.0 / 3, -1, -1.0 / 3).finished(), (Vector(3) << 1.0 / 3, -1, 1.0 / 15).finished(),
                 (Vector(3) << 0, -1, -0.5).finished()};

  for (Index K = 0; K <= 3; ++K) {
    const Multisample ms = all.prefix(K);
    const SolutionCloud cloud = solution_cloud(scenario_problem(prog, ms, F), 100, 42);
    Vector lo = cloud.points.front(), hi = lo;
    for (const auto& x : cloud.points) {
      lo = lo.cwiseMin(x);
      hi = hi.cwiseMax(x);
    }
    const Certificate c = certify(prog, ms, F, 0.1);
    std::printf("K=%td  cloud %zu pts  x1 in [%.4f, %.4f]  x2 in [%.4f, %.4f]  s_K=%td  eps=%.4f%s\n", K, cloud.size(),
                lo[0], hi[0], lo[1], hi[1], c.s_K, c.epsilon, c.vacuous ? " (vacuous)" : "");
  }
}
