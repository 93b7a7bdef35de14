#pragma once

#include <vector>

#include "oddo/model.hpp"

namespace oddo {

// A finite system of affine rows over free variables.  Rows are either
// inequalities (dot(a, z) <= rhs) or equalities; fme_eliminate rewrites
// equalities as <= pairs internally before eliminating.
enum class Relation { LE, EQ };

struct AffineRow {
  std::vector<double> a;
  Relation rel = Relation::LE;
  double rhs = 0.0;
};

struct AffineSystem {
  int n = 0;  // number of free variables
  std::vector<AffineRow> rows;

  // True when some derived row reads 0 <= rhs with rhs < -tol, certifying an
  // empty projection.
  bool infeasible_certificate(double tol = 1e-9) const;
};

// Builds the remaining-horizon system for stages t_bar..T-1 given fixed
// prefix decisions: coupling rows with the prefix substituted into the rhs,
// plus box rows for stages strictly after t_bar.  The stage-t_bar box is
// intersected by the callers instead.  Variables are the flattened
// coordinates of stages t_bar..T-1.
AffineSystem remaining_horizon_system(
    const InstanceConstraints& constraints,
    const std::vector<std::vector<double>>& fixed_prefix, int t_bar);

// One Fourier-Motzkin elimination step: pairs every positive-coefficient row
// with every negative-coefficient row, passes zero-coefficient rows through,
// and prunes rows dominated by an identical-coefficient row with weaker rhs.
// The eliminated variable's column is removed (variables above var_index
// shift down by one).  All-zero rows with negative rhs are kept as
// infeasibility certificates.
AffineSystem fme_eliminate(const AffineSystem& system, int var_index);

struct StageInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Exact projection of the feasible set onto stage t_bar (one-dimensional
// stages), already intersected with the stage box.  Eliminates the free
// variables of stages t_bar+1..T-1 back to front.  An interval empty by more
// than 1e-9 raises InfeasibleError naming the violated derived row; within
// the tolerance the interval collapses to its midpoint.
StageInterval project_onto_stage(const InstanceConstraints& constraints,
                                 const std::vector<std::vector<double>>& prefix,
                                 int t_bar);

// Multi-dimensional variant: returns the remaining-horizon system restricted
// to the stage-t_bar coordinates (all later coordinates eliminated), with the
// stage box appended.
AffineSystem project_onto_stage_system(
    const InstanceConstraints& constraints,
    const std::vector<std::vector<double>>& prefix, int t_bar);

// Battery-style cumulative chain: for stages t (0-based) the running energy
// dt * sum_{s<=t} x^s must stay in [C_lo[t], C_hi[t]] for t < T-1 and equal C
// at t = T-1.  The backward recursion
//   lo[t] = max(C_lo[t], lo[t+1] - dt*u[t+1]),
//   hi[t] = min(C_hi[t], hi[t+1] - dt*l[t+1]),
// seeded with lo[T-1] = hi[T-1] = C, tightens the bands so that every value
// inside them admits a feasible completion.  O(T), computed once per
// instance, before the first stage.
struct CapacityBounds {
  std::vector<double> lo, hi;  // size T, energy units
};

CapacityBounds battery_projection_bounds(double dt,
                                         const std::vector<double>& l,
                                         const std::vector<double>& u,
                                         const std::vector<double>& C_lo,
                                         const std::vector<double>& C_hi,
                                         double C);

// The O(1) per-stage projection: given the prefix energy dt * sum_{s<t_bar}
// x^s, the feasible stage interval is
//   [max((lo[t_bar] - prefix)/dt, l[t_bar]),
//    min((hi[t_bar] - prefix)/dt, u[t_bar])].
StageInterval battery_stage_interval(const CapacityBounds& bounds, double dt,
                                     const std::vector<double>& l,
                                     const std::vector<double>& u, int t_bar,
                                     double prefix_energy);

}  // namespace oddo
