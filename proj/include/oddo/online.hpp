#pragma once

#include <string>
#include <vector>

#include "oddo/model.hpp"
#include "oddo/projection.hpp"

namespace oddo {

// One revealed stage cost, delivered strictly in stage order.
struct RevealedStage {
  int t = 0;
  CostFunction cost;
};

// Pull-based source of revealed costs, so the engine can be driven by
// generators, files, or live measurements without change.  next(t) must
// return the cost of stage t (0-based) and is called once per stage, in
// order.
class CostStream {
 public:
  virtual ~CostStream() = default;
  virtual RevealedStage next(int t) = 0;
};

// In-memory stream over a known cost vector.
class VectorCostStream final : public CostStream {
 public:
  explicit VectorCostStream(std::vector<CostFunction> costs)
      : costs_(std::move(costs)) {}
  RevealedStage next(int t) override;

 private:
  std::vector<CostFunction> costs_;
};

// The prediction the engine actually consumes: the per-stage linear dual
// pressure d[t][i] added to the revealed cost.  Constructed either from a
// full multiplier vector or directly from per-stage aggregated terms (the
// sum of inequality and equality aggregates), which carry exactly the same
// information for the subproblems.
//
// inequality_weights keeps the nonnegative per-row multipliers when the
// prediction was built from a full multiplier vector.  A positive predicted
// multiplier signals, by complementary slackness, that the corresponding
// row should end up tight; the full-path subproblem uses the weights to
// break ties between equally dualized stage decisions in favour of
// completions that can still close those rows.  With linear stage costs
// the dualized objective is flat across the whole optimal face, so without
// this rule the vertex choice is noise-driven; with exact multipliers the
// rule recovers an offline-optimal assembly.  Aggregated-term predictions
// carry no row structure and leave the weights empty (no tie-break).
struct DualPrediction {
  std::vector<std::vector<double>> stage_terms;  // d[t][i]
  std::vector<double> inequality_weights;        // max(mu_j, 0), optional

  static DualPrediction from_multipliers(const InstanceConstraints& constraints,
                                         const MultiplierVector& m);
  static DualPrediction from_stage_terms(
      std::vector<std::vector<double>> terms);
};

enum class Strategy { Auto, Projected, Full };

Strategy resolve_strategy(const InstanceConstraints& constraints,
                          Strategy requested);

struct StageDecision {
  int t = 0;
  std::vector<double> x;
  std::string kind;  // "projected" or "full"
  bool has_interval = false;
  StageInterval interval;  // projected path only
  // Smallest remaining right-hand-side slack across coupling inequalities
  // after fixing this stage (diagnostic).
  double cumulative_slack = 0.0;
};

struct OnlineTrace {
  std::vector<StageDecision> stages;
  std::vector<std::vector<double>> x;  // assembled online solution
  double objective = 0.0;              // sum of realized stage costs
  FeasibilityReport feasibility;       // post-run check at 1e-8
};

// The per-stage engine: reveal f^t, solve the stage subproblem under the
// predicted dual pressure, fix the decision, continue.  The assembled
// solution is feasibility-checked at 1e-8; failure raises InfeasibleError.
// Inverse-gradient domain violations are re-raised with the stage index.
OnlineTrace run_online(const InstanceConstraints& constraints,
                       CostStream& stream, const DualPrediction& prediction,
                       Strategy strategy = Strategy::Auto);
OnlineTrace run_online(const InstanceConstraints& constraints,
                       CostStream& stream, const MultiplierVector& prediction,
                       Strategy strategy = Strategy::Auto);
// Convenience: replay the instance's own costs as the stream.
OnlineTrace run_online(const ProblemInstance& instance,
                       const MultiplierVector& prediction,
                       Strategy strategy = Strategy::Auto);

// min f(x) + pressure * x over the projected interval; closed form (clip of
// the pressure-shifted minimizer, or an endpoint for linear costs).
double solve_stage_projected(const CostFunction& cost, double pressure,
                             const StageInterval& interval);

// Remaining-horizon subproblem: minimize the dualized stage cost
// f(x^t) + dot(pressure, x^t) with all later stages cost-free, subject to
// every original constraint with the prefix substituted.  Only the stage-t
// component is returned.  Linear costs go through the LP; strictly convex
// scalar stages through the exact interval projection.  When
// inequality_weights is nonempty (one nonnegative weight per coupling
// inequality), ties between equally dualized LP solutions are broken by a
// second solve that minimizes the weighted residual slack
// sum_j w_j (rhs_j - a_j . x), i.e. the predicted complementary-slackness
// gap of the completion.
std::vector<double> solve_stage_full(
    const InstanceConstraints& constraints, int t_bar, const CostFunction& cost,
    const std::vector<double>& pressure,
    const std::vector<std::vector<double>>& fixed_prefix,
    const std::vector<double>& inequality_weights = {});

}  // namespace oddo
