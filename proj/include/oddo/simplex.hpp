#pragma once

#include <vector>

#include "oddo/projection.hpp"

namespace oddo {

// Dense LP in the row form used across the project:
//   minimize c.x  subject to  system rows (a.x <= rhs or a.x == rhs),
//   lower <= x <= upper  (kNoBound sentinels mean unbounded).
struct LpProblem {
  AffineSystem system;
  std::vector<double> c;
  std::vector<double> lower;
  std::vector<double> upper;

  void validate() const;
};

struct LpSolution {
  std::vector<double> x;
  // One dual per system row, in stationarity convention: mu_j = row_dual[j]
  // for inequality rows (>= 0 when binding), lambda_k = row_dual[k] for
  // equality rows, satisfying  c + sum_j row_dual[j] * a_j = 0  on
  // coordinates strictly inside their bounds.
  std::vector<double> row_dual;
  double objective = 0.0;
};

// Two-phase bounded-variable primal simplex with Bland's rule.  Throws
// InfeasibleError when phase 1 cannot zero the artificials, SolverError on
// an unbounded phase-2 ray or iteration blow-up.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace oddo
