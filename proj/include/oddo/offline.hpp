#pragma once

#include <vector>

#include "oddo/model.hpp"
#include "oddo/offline_types.hpp"

namespace oddo {

// Scaled KKT residuals of a primal/dual pair for the stage-coupled problem.
//  - stationarity: per coordinate, gradient of the local Lagrangian; at an
//    active box bound only the sign pointing back into the box counts.
//  - primal: worst constraint violation.
//  - dual: most negative inequality multiplier.
//  - complementarity: worst mu_j * |slack_j| over inequality rows.
// activity_tol decides when a coordinate counts as sitting on its bound.
KktReport kkt_residuals(const ProblemInstance& instance,
                        const std::vector<std::vector<double>>& x,
                        const MultiplierVector& m,
                        double activity_tol = 1e-9);

// Dense-simplex-backed solver for instances with linear costs.  Duals are
// read from the terminal basis and returned in the mu/lambda convention of
// MultiplierVector (mu >= 0 on binding <= rows).  KKT-certified.
OfflineSolution solve_lp_with_duals(const ProblemInstance& instance);

// Independent low-resolution reference: grids the box at the given
// resolution and returns the best feasible point.  Equality rows are honored
// exactly by Gauss-eliminating them and gridding only the remaining free
// coordinates; inequality/box checks get a resolution-scaled slack so the
// snapped optimum is never filtered out.  Total dimension <= 5.
struct OracleResult {
  std::vector<std::vector<double>> x;
  double objective = 0.0;
};

OracleResult brute_force_oracle(const ProblemInstance& instance,
                                double resolution);

// Dispatch: structured strictly convex instances go to the nested RAP
// decomposition, linear-cost instances to the simplex; anything else is
// unsupported (SolverError).
OfflineSolution solve_offline(const ProblemInstance& instance);

}  // namespace oddo
