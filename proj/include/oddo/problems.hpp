#pragma once

#include <cstdint>
#include <vector>

#include "oddo/model.hpp"

namespace oddo {

// Battery scheduling: T intervals of dt hours, charge rate x^t in [l, u] (W),
// running state of charge dt * sum_{s<=t} x^s within [C_lo, C_hi] (Wh,
// relative to the initial level) and equal to C_end after the last interval.
// Objective: sum_t (p^t + x^t)^2 for net consumption p (W).
struct BatteryParams {
  int T = 0;
  double dt = 0.0;
  std::vector<double> l, u;        // size T
  std::vector<double> C_lo, C_hi;  // size T-1 (bands for t < T)
  double C_end = 0.0;
  std::vector<double> p;           // size T, filled by the caller/generator

  void validate() const;
};

// The reference configuration: 96 quarter-hour intervals, +-8670 W rate,
// +-5890 Wh band, zero net terminal charge.  p is left empty.
BatteryParams battery_defaults();

// Deterministic synthetic aggregate consumption (W, length 96) for a pool of
// households: per-household base load, morning and evening Gaussian peaks, a
// day-to-day AR(1) weather factor shared by all households, and per-reading
// noise.  See docs/file-formats.md for the exact generative formula.  With
// shift_into_increasing the profile is raised so min_t p^t >= floor, the
// regime where the battery objective is increasing on the feasible box.
std::vector<double> synthetic_consumption(std::uint64_t seed, int day_index,
                                          int households = 72,
                                          bool shift_into_increasing = false,
                                          double floor = 8670.0);

// Materializes the battery model with unit-coefficient cumulative rows (the
// rhs absorbs dt), so multipliers line up with the chain dual form.  Row
// order: the T-1 upper-band rows, then the T-1 lower-band rows, then the
// terminal equality.
ProblemInstance build_battery_instance(const BatteryParams& params);

// battery_defaults + synthetic_consumption(seed, day_index).
ProblemInstance generate_battery_instance(std::uint64_t seed, int day_index);

// Inventory-management data law (t, i are 1-based as in the model writeup):
// demand d^t = 1000(1 + sin(pi(t-1)/12)/2), nominal unit cost
// cbar^t_i = Ebar_i(1 - sin(pi(t-1)/12)/2) with Ebar = (1, 1.5, 2).
double im_demand(int t);
double im_nominal_cost(int t, int i);

struct ImParams {
  int T = 24;
  int N = 3;
  double stage_cap = 567.0;      // per-factory per-period limit
  double horizon_cap = 13600.0;  // per-factory total limit
  double L = 500.0;              // warehouse minimum
  double U = 2000.0;             // warehouse maximum
  double S = 500.0;              // initial stock
};

// 24 three-dimensional stages with linear costs c^t_i drawn uniformly from
// [0.8, 1.2] * cbar^t_i.  Rows: 3 horizon capacities, then 24 lower and 24
// upper warehouse-stock rows (cumulative production vs cumulative demand).
ProblemInstance generate_im_instance(std::uint64_t seed,
                                     const ImParams& params = ImParams{});

// Builds the IM cost vector from a flattened (stage-major) c matrix; the
// nominal-strategy plumbing uses this as its cost builder.
std::vector<CostFunction> im_costs_from_parameters(
    const std::vector<double>& c_flat, int T = 24, int N = 3);

enum class CostFamily { Quadratic, Power, Exponential };

// Strictly convex stage costs, increasing on boxes with the given lower
// bounds: Quadratic (p_t + x)^2, Power K(x/a_t + b_t)^c with one (K, c) pair
// shared by all stages, or Exponential K_t exp(x/a_t + b_t).  Redrawing with
// a new seed on fixed constraints gives the uncertain-cost test instances.
std::vector<CostFunction> random_isub_costs(std::uint64_t seed,
                                            const std::vector<double>& box_lower,
                                            CostFamily family);

// Random laminar-capacity resource instance with strictly convex costs that
// are increasing on the feasible boxes (the regret-bound setting): random
// nested interval sets with capacity fractions, ground total strictly inside
// the reachable range, and per-family cost parameters shifted so gradients
// stay nonnegative.
ProblemInstance generate_random_isub_instance(std::uint64_t seed, int T,
                                              CostFamily family);

// The three-stage worked example: minimize sum (x^t)^2 + Y^t x^t with
// Y = (-4, 1, -5), sum_t x^t = 10, 0 <= x^t <= 6, costs stored in exact
// expanded form via completed squares.
ProblemInstance three_stage_example();

}  // namespace oddo
