#pragma once

#include "oddo/model.hpp"
#include "oddo/offline_types.hpp"

namespace oddo {

// Offline solver for instances whose coupling is a ground-set resource
// equality plus capacity intervals on a laminar collection of stage subsets
// (structure kinds Rap, Laminar, BatteryChain) with strictly convex scalar
// stage costs.
//
// The laminar family is arranged as a tree (stages are leaves, each set's
// parent is its smallest strict superset) and every node is reduced to its
// supply curve: the total the subtree delivers when the surrounding region
// runs at marginal price nu.  A stage supplies the box-clipped gradient
// inverse; a set clips the sum of its children's supplies into its capacity
// interval.  Curves are continuous and nondecreasing, so the ground equality
// becomes scalar root-finding in the root marginal, and recovery descends
// the tree re-solving the marginal only where a clip binds.
//
// Multipliers fall out of the marginal gaps: the ground lambda is minus the
// root marginal, and a set pinned at a bound is charged the difference
// between the enclosing region's marginal and its own, which curve
// monotonicity keeps nonnegative.  The result is KKT-certified; residuals
// above 1e-6 raise SolverError.
OfflineSolution solve_nested_rap(const ProblemInstance& instance);

}  // namespace oddo
