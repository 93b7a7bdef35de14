#include "oddo/online.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "oddo/errors.hpp"
#include "oddo/lagrangian.hpp"
#include "oddo/simplex.hpp"

namespace oddo {

RevealedStage VectorCostStream::next(int t) {
  if (t < 0 || t >= static_cast<int>(costs_.size())) {
    throw ConfigError("cost stream exhausted at stage " + std::to_string(t + 1));
  }
  return {t, costs_[static_cast<std::size_t>(t)]};
}

DualPrediction DualPrediction::from_multipliers(
    const InstanceConstraints& constraints, const MultiplierVector& m) {
  DualPrediction p;
  p.stage_terms = dual_linear_terms(constraints, m);
  p.inequality_weights.reserve(m.mu.size());
  for (double mu : m.mu) {
    p.inequality_weights.push_back(std::max(mu, 0.0));
  }
  return p;
}

DualPrediction DualPrediction::from_stage_terms(
    std::vector<std::vector<double>> terms) {
  DualPrediction p;
  p.stage_terms = std::move(terms);
  return p;
}

Strategy resolve_strategy(const InstanceConstraints& constraints,
                          Strategy requested) {
  if (requested != Strategy::Auto) return requested;
  const bool structured =
      constraints.structure.kind != StructureKind::General &&
      constraints.scalar_stages();
  return structured ? Strategy::Projected : Strategy::Full;
}

double solve_stage_projected(const CostFunction& cost, double pressure,
                             const StageInterval& interval) {
  if (interval.lo > interval.hi) {
    throw InfeasibleError("projected stage interval is empty");
  }
  return local_solution_1d(cost, interval.lo, interval.hi, pressure);
}

namespace {

// Per-stage band arrays for the cumulative-chain recursion, recovered from
// the structure annotation (prefix sets keyed by their last member, bounds
// already in running-sum units).
struct ChainBands {
  std::vector<double> lo, hi;  // size T-1
};

ChainBands chain_bands(const InstanceConstraints& constraints) {
  const int T = constraints.T;
  ChainBands bands;
  bands.lo.assign(static_cast<std::size_t>(T) - 1, -kNoBound);
  bands.hi.assign(static_cast<std::size_t>(T) - 1, kNoBound);
  std::vector<bool> seen(static_cast<std::size_t>(T) - 1, false);
  for (const SetCapacity& sc : constraints.structure.sets) {
    const int last = sc.members.back();
    if (static_cast<int>(sc.members.size()) != last + 1 || last >= T - 1) {
      throw SolverError("chain structure annotation is not a prefix family");
    }
    bands.lo[static_cast<std::size_t>(last)] = sc.lo;
    bands.hi[static_cast<std::size_t>(last)] = sc.hi;
    seen[static_cast<std::size_t>(last)] = true;
  }
  for (bool s : seen) {
    if (!s) throw SolverError("chain structure annotation misses a prefix");
  }
  return bands;
}

double min_remaining_slack(const InstanceConstraints& constraints,
                           const std::vector<std::vector<double>>& x,
                           int next_stage) {
  double slack = std::numeric_limits<double>::infinity();
  for (const LinearCoupling& row : constraints.coupling.inequalities) {
    slack = std::min(slack, row.rhs - row.prefix_lhs(x, next_stage));
  }
  return std::isfinite(slack) ? slack : 0.0;
}

std::vector<double> full_stage_lp(
    const InstanceConstraints& constraints, int t_bar, const CostFunction& cost,
    const std::vector<double>& pressure,
    const std::vector<std::vector<double>>& prefix,
    const std::vector<double>& inequality_weights) {
  const int T = constraints.T;
  std::vector<int> offset(static_cast<std::size_t>(T - t_bar) + 1, 0);
  for (int t = t_bar; t < T; ++t) {
    offset[static_cast<std::size_t>(t - t_bar) + 1] =
        offset[static_cast<std::size_t>(t - t_bar)] + constraints.dimension(t);
  }
  const int n = offset.back();

  // Coefficients of a coupling row restricted to the free (remaining)
  // columns; zero outside the row's remaining support.
  auto remaining_coeffs = [&](const LinearCoupling& row) {
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    bool any = false;
    for (int t = t_bar; t < T; ++t) {
      const std::vector<double>& at = row.coeffs[static_cast<std::size_t>(t)];
      for (std::size_t i = 0; i < at.size(); ++i) {
        a[static_cast<std::size_t>(
            offset[static_cast<std::size_t>(t - t_bar)]) + i] = at[i];
        any = any || at[i] != 0.0;
      }
    }
    return std::make_pair(std::move(a), any);
  };

  LpProblem lp;
  lp.system.n = n;
  lp.c.assign(static_cast<std::size_t>(n), 0.0);
  lp.lower.resize(static_cast<std::size_t>(n));
  lp.upper.resize(static_cast<std::size_t>(n));
  for (int t = t_bar; t < T; ++t) {
    const StageSet& box = constraints.stages[static_cast<std::size_t>(t)];
    for (int i = 0; i < box.dimension(); ++i) {
      const std::size_t col = static_cast<std::size_t>(
          offset[static_cast<std::size_t>(t - t_bar)] + i);
      lp.lower[col] = box.lower[static_cast<std::size_t>(i)];
      lp.upper[col] = box.upper[static_cast<std::size_t>(i)];
    }
  }
  for (int i = 0; i < constraints.dimension(t_bar); ++i) {
    lp.c[static_cast<std::size_t>(i)] =
        cost.c_lin[static_cast<std::size_t>(i)] +
        pressure[static_cast<std::size_t>(i)];
  }

  auto add_rows = [&](const std::vector<LinearCoupling>& rows, Relation rel) {
    for (const LinearCoupling& row : rows) {
      auto [a, any] = remaining_coeffs(row);
      AffineRow r;
      r.a = std::move(a);
      r.rel = rel;
      r.rhs = row.rhs - row.prefix_lhs(prefix, t_bar);
      if (!any) {
        const double tol = 1e-9 * std::max(1.0, std::abs(row.rhs));
        const bool violated =
            rel == Relation::LE ? r.rhs < -tol : std::abs(r.rhs) > tol;
        if (violated) {
          throw InfeasibleError(
              "fixed prefix already violates a coupling row");
        }
        continue;
      }
      lp.system.rows.push_back(std::move(r));
    }
  };
  add_rows(constraints.coupling.inequalities, Relation::LE);
  add_rows(constraints.coupling.equalities, Relation::EQ);

  LpSolution sol = solve_lp(lp);

  // Tie-break pass: with linear costs the dualized stage objective is flat
  // on its optimal face, so the vertex above is an arbitrary (noise-driven)
  // choice.  When per-row multiplier weights are available, re-solve over
  // the (numerically thickened) optimal face, minimizing the predicted
  // complementary-slackness gap sum_j w_j (rhs_j - a_j . x).  With exact
  // multipliers the gap reaches zero exactly on completions of offline
  // optima, which makes the exact-prediction run reproduce the offline
  // objective; for inexact predictions it is a deterministic preference for
  // keeping predicted-tight rows closable.
  bool weighted = false;
  for (double w : inequality_weights) weighted = weighted || w > 0.0;
  if (weighted) {
    if (inequality_weights.size() != constraints.coupling.inequalities.size()) {
      throw ConfigError(
          "inequality tie-break weights do not match the coupling rows");
    }
    LpProblem tie = lp;
    tie.c.assign(static_cast<std::size_t>(n), 0.0);
    bool varies = false;
    for (std::size_t j = 0; j < inequality_weights.size(); ++j) {
      const double w = inequality_weights[j];
      if (w <= 0.0) continue;
      auto [a, any] = remaining_coeffs(
          constraints.coupling.inequalities[j]);
      if (!any) continue;
      for (std::size_t col = 0; col < a.size(); ++col) {
        tie.c[col] -= w * a[col];
        varies = varies || a[col] != 0.0;
      }
    }
    if (varies) {
      AffineRow bound;
      bound.a = lp.c;
      bound.rel = Relation::LE;
      bound.rhs = sol.objective + 1e-8 * (1.0 + std::abs(sol.objective));
      tie.system.rows.push_back(std::move(bound));
      sol = solve_lp(tie);
    }
  }

  return std::vector<double>(
      sol.x.begin(), sol.x.begin() + constraints.dimension(t_bar));
}

}  // namespace

std::vector<double> solve_stage_full(
    const InstanceConstraints& constraints, int t_bar, const CostFunction& cost,
    const std::vector<double>& pressure,
    const std::vector<std::vector<double>>& fixed_prefix,
    const std::vector<double>& inequality_weights) {
  if (t_bar < 0 || t_bar >= constraints.T) {
    throw ConfigError("stage index out of range");
  }
  if (static_cast<int>(pressure.size()) != constraints.dimension(t_bar)) {
    throw ConfigError("pressure dimension does not match the stage");
  }
  if (cost.kind == CostKind::Linear) {
    return full_stage_lp(constraints, t_bar, cost, pressure, fixed_prefix,
                         inequality_weights);
  }
  if (constraints.dimension(t_bar) == 1 && cost.strictly_convex()) {
    StageInterval iv = project_onto_stage(constraints, fixed_prefix, t_bar);
    return {local_solution_1d(cost, iv.lo, iv.hi, pressure[0])};
  }
  throw SolverError(
      "full stage subproblem supports linear costs or strictly convex "
      "one-dimensional stages");
}

OnlineTrace run_online(const InstanceConstraints& constraints,
                       CostStream& stream, const DualPrediction& prediction,
                       Strategy strategy) {
  constraints.validate();
  const int T = constraints.T;
  if (static_cast<int>(prediction.stage_terms.size()) != T) {
    throw ConfigError("prediction does not cover every stage");
  }
  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(prediction.stage_terms[static_cast<std::size_t>(t)]
                             .size()) != constraints.dimension(t)) {
      throw ConfigError("prediction dimension mismatch at stage " +
                        std::to_string(t + 1));
    }
  }
  const Strategy chosen = resolve_strategy(constraints, strategy);
  if (chosen == Strategy::Projected && !constraints.scalar_stages()) {
    throw ConfigError(
        "projected strategy requires one-dimensional stages; use full");
  }

  // Cumulative-chain instances get the O(T) interval recursion, computed
  // once up front; other structured instances fall back to the generic
  // eliminate-the-future projection per stage.
  bool use_chain = false;
  CapacityBounds chain_bounds;
  std::vector<double> box_lo, box_hi;
  if (chosen == Strategy::Projected &&
      constraints.structure.kind == StructureKind::BatteryChain) {
    ChainBands bands = chain_bands(constraints);
    box_lo.resize(static_cast<std::size_t>(T));
    box_hi.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      box_lo[static_cast<std::size_t>(t)] =
          constraints.stages[static_cast<std::size_t>(t)].lower[0];
      box_hi[static_cast<std::size_t>(t)] =
          constraints.stages[static_cast<std::size_t>(t)].upper[0];
    }
    // Rows are in running-sum units, so the recursion runs with dt = 1.
    chain_bounds = battery_projection_bounds(
        1.0, box_lo, box_hi, bands.lo, bands.hi,
        constraints.structure.ground_rhs);
    use_chain = true;
  }

  OnlineTrace trace;
  trace.x.reserve(static_cast<std::size_t>(T));
  double prefix_sum = 0.0;
  for (int t = 0; t < T; ++t) {
    RevealedStage revealed = stream.next(t);
    if (revealed.t != t) {
      throw ConfigError("cost stream out of order at stage " +
                        std::to_string(t + 1));
    }
    revealed.cost.validate();
    if (revealed.cost.dimension() != 0 &&
        revealed.cost.dimension() != constraints.dimension(t)) {
      throw ConfigError("revealed cost dimension mismatch at stage " +
                        std::to_string(t + 1));
    }

    StageDecision dec;
    dec.t = t;
    try {
      if (chosen == Strategy::Projected) {
        dec.kind = "projected";
        dec.has_interval = true;
        dec.interval =
            use_chain ? battery_stage_interval(chain_bounds, 1.0, box_lo,
                                               box_hi, t, prefix_sum)
                      : project_onto_stage(constraints, trace.x, t);
        const double pressure =
            prediction.stage_terms[static_cast<std::size_t>(t)][0];
        dec.x = {solve_stage_projected(revealed.cost, pressure, dec.interval)};
      } else {
        dec.kind = "full";
        dec.x = solve_stage_full(
            constraints, t, revealed.cost,
            prediction.stage_terms[static_cast<std::size_t>(t)], trace.x,
            prediction.inequality_weights);
      }
    } catch (const DomainError& e) {
      throw DomainError("stage " + std::to_string(t + 1) + ": " + e.what());
    }

    trace.x.push_back(dec.x);
    if (constraints.dimension(t) == 1) prefix_sum += dec.x[0];
    trace.objective += revealed.cost.value(dec.x);
    dec.cumulative_slack = min_remaining_slack(constraints, trace.x, t + 1);
    trace.stages.push_back(std::move(dec));
  }

  trace.feasibility = check_feasibility(constraints, trace.x, 1e-8);
  if (!trace.feasibility.feasible) {
    throw InfeasibleError("assembled online solution is infeasible: " +
                          trace.feasibility.worst);
  }
  return trace;
}

OnlineTrace run_online(const InstanceConstraints& constraints,
                       CostStream& stream, const MultiplierVector& prediction,
                       Strategy strategy) {
  return run_online(constraints, stream,
                    DualPrediction::from_multipliers(constraints, prediction),
                    strategy);
}

OnlineTrace run_online(const ProblemInstance& instance,
                       const MultiplierVector& prediction, Strategy strategy) {
  VectorCostStream stream(instance.costs);
  return run_online(instance.constraints, stream, prediction, strategy);
}

}  // namespace oddo
