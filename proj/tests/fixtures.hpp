#pragma once

#include "scenvi/scenario/program.hpp"

namespace scenvi::fixture {

// Triangle conv{(0,0),(1,0),(1/2,1)}.
inline Polytope triangle() {
  Matrix A(3, 2);
  A << 0, -1, -2, 1, 2, 1;
  Vector b(3);
  b << 0, 0, 2;
  return {A, b};
}

// Triangle instance: one halfspace per sample, flattened as (a1, a2, b).
inline ScenarioProgram triangle_program() { return ScenarioProgram::explicit_halfspaces(triangle(), 1); }

inline Multisample triangle_samples(Index K = 3) {
  Multisample ms;
  const double rows[3][3] = {{-1.0 / 3, -1, -1.0 / 3}, {1.0 / 3, -1, 1.0 / 15}, {0, -1, -0.5}};
  for (Index k = 0; k < K; ++k) {
    Vector d(3);
    d << rows[k][0], rows[k][1], rows[k][2];
    ms.samples.push_back(d);
  }
  return ms;
}

inline AffineMapping triangle_mapping() {
  Vector q(2);
  q << 0, 1;
  return {Matrix::Zero(2, 2), q};
}

inline ViProblem triangle_problem(Index K) {
  return scenario_problem(triangle_program(), triangle_samples(K), triangle_mapping());
}

} // namespace scenvi::fixture
