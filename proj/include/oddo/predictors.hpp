#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oddo/cost.hpp"
#include "oddo/model.hpp"
#include "oddo/offline_types.hpp"

namespace oddo {

// Optimal multipliers collected from solved training instances.
struct MultiplierHistory {
  std::vector<MultiplierVector> entries;

  void validate() const;  // nonempty, uniform dimensions
};

// Uncertain cost parameters of the training instances, flattened to one
// vector per instance (consumption profiles, cost matrices in row-major
// stage order, ...).
struct ParameterHistory {
  std::vector<std::vector<double>> entries;

  void validate() const;  // nonempty, uniform length
};

enum class CandidateKind { Min, Max, Mean, Median };

CandidateKind candidate_kind_from_string(const std::string& name);
std::string to_string(CandidateKind kind);

// Component-wise order statistic over the history.  Median of an even count
// is the mean of the two middle values.
MultiplierVector candidate(const MultiplierHistory& history,
                           CandidateKind kind);

// Element-wise mean of the parameter history.
std::vector<double> nominal_parameters(const ParameterHistory& history);

// Solve the deterministic instance built from the averaged parameters.  The
// returned decisions stay feasible under any realized costs (constraints are
// cost-independent) and are applied as-is by the baseline; the multipliers
// seed the online engine's prediction arm.
struct NominalResult {
  std::vector<std::vector<double>> x;
  MultiplierVector multipliers;
  double nominal_objective = 0.0;  // under the averaged costs
};

using CostBuilder =
    std::function<std::vector<CostFunction>(const std::vector<double>&)>;

NominalResult nominal_strategy(const InstanceConstraints& constraints,
                               const ParameterHistory& history,
                               const CostBuilder& build_costs);

// Single-multiplier predictor for pure resource-allocation instances with a
// common base function:  minimize sum_t a^t base((x^t + a^t b^t)/a^t) over
// sum x = R needs only the aggregate sum_t a^t b^t, not the individual b^t.
// Returns the equality multiplier in the same sign convention as solve_rap
// (lambda such that the stage pressure is +lambda), i.e.
//   lambda_hat = -grad_base((R + aggregate)/sum(a)).
double aggregate_rap_predictor(double R, const std::vector<double>& a,
                               double predicted_aggregate,
                               const BaseFunction& base);

// Per-stage aggregated dual terms (sum_j mu_j*atilde[t][j],
// sum_k lambda_k*btilde[t][k]): everything the stage subproblems need from a
// multiplier vector when coupling rows scale a common per-stage coefficient.
struct AggregatedTerms {
  std::vector<double> mu_term;
  std::vector<double> lambda_term;

  // stage_terms consumable by the online engine (scalar stages).
  std::vector<std::vector<double>> stage_terms() const;
};

AggregatedTerms aggregate_dual_terms(
    const MultiplierVector& m,
    const std::vector<std::vector<double>>& a_tilde,
    const std::vector<std::vector<double>>& b_tilde);

// Convenience overload reading the per-stage coefficients straight from the
// coupling rows of a scalar-stage instance.
AggregatedTerms aggregate_dual_terms(const InstanceConstraints& constraints,
                                     const MultiplierVector& m);

}  // namespace oddo
