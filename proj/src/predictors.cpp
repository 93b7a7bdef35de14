#include "oddo/predictors.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>

#include "oddo/errors.hpp"
#include "oddo/offline.hpp"

namespace oddo {

void MultiplierHistory::validate() const {
  if (entries.empty()) throw ConfigError("multiplier history is empty");
  for (const MultiplierVector& m : entries) {
    if (m.mu.size() != entries.front().mu.size() ||
        m.lambda.size() != entries.front().lambda.size()) {
      throw ConfigError("multiplier history entries differ in dimension");
    }
  }
}

void ParameterHistory::validate() const {
  if (entries.empty()) throw ConfigError("parameter history is empty");
  for (const std::vector<double>& p : entries) {
    if (p.size() != entries.front().size()) {
      throw ConfigError("parameter history entries differ in length");
    }
  }
}

CandidateKind candidate_kind_from_string(const std::string& name) {
  if (name == "min") return CandidateKind::Min;
  if (name == "max") return CandidateKind::Max;
  if (name == "mean") return CandidateKind::Mean;
  if (name == "median") return CandidateKind::Median;
  throw ConfigError("unknown candidate kind: " + name);
}

std::string to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::Min: return "min";
    case CandidateKind::Max: return "max";
    case CandidateKind::Mean: return "mean";
    case CandidateKind::Median: return "median";
  }
  return "?";
}

namespace {

double statistic(std::vector<double>& column, CandidateKind kind) {
  switch (kind) {
    case CandidateKind::Min:
      return *std::min_element(column.begin(), column.end());
    case CandidateKind::Max:
      return *std::max_element(column.begin(), column.end());
    case CandidateKind::Mean:
      return std::accumulate(column.begin(), column.end(), 0.0) /
             static_cast<double>(column.size());
    case CandidateKind::Median: {
      std::sort(column.begin(), column.end());
      const std::size_t n = column.size();
      return n % 2 == 1 ? column[n / 2]
                        : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    }
  }
  throw ConfigError("unknown candidate kind");
}

}  // namespace

MultiplierVector candidate(const MultiplierHistory& history,
                           CandidateKind kind) {
  history.validate();
  MultiplierVector out;
  out.mu.resize(history.entries.front().mu.size());
  out.lambda.resize(history.entries.front().lambda.size());
  std::vector<double> column(history.entries.size());
  for (std::size_t j = 0; j < out.mu.size(); ++j) {
    for (std::size_t h = 0; h < history.entries.size(); ++h) {
      column[h] = history.entries[h].mu[j];
    }
    out.mu[j] = statistic(column, kind);
  }
  for (std::size_t k = 0; k < out.lambda.size(); ++k) {
    for (std::size_t h = 0; h < history.entries.size(); ++h) {
      column[h] = history.entries[h].lambda[k];
    }
    out.lambda[k] = statistic(column, kind);
  }
  return out;
}

std::vector<double> nominal_parameters(const ParameterHistory& history) {
  history.validate();
  std::vector<double> mean(history.entries.front().size(), 0.0);
  for (const std::vector<double>& p : history.entries) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += p[i];
  }
  for (double& v : mean) v /= static_cast<double>(history.entries.size());
  return mean;
}

NominalResult nominal_strategy(const InstanceConstraints& constraints,
                               const ParameterHistory& history,
                               const CostBuilder& build_costs) {
  ProblemInstance nominal;
  nominal.constraints = constraints;
  nominal.costs = build_costs(nominal_parameters(history));
  if (static_cast<int>(nominal.costs.size()) != constraints.T) {
    throw ConfigError("cost builder returned the wrong number of stages");
  }
  OfflineSolution sol = solve_offline(nominal);
  NominalResult res;
  res.x = std::move(sol.x);
  res.multipliers = std::move(sol.multipliers);
  res.nominal_objective = sol.objective;
  return res;
}

double aggregate_rap_predictor(double R, const std::vector<double>& a,
                               double predicted_aggregate,
                               const BaseFunction& base) {
  base.validate();
  double total = 0.0;
  for (double v : a) {
    if (v <= 0.0) throw ConfigError("scale coefficients must be positive");
    total += v;
  }
  if (total <= 0.0) throw ConfigError("empty scale vector");
  return -base.gradient((R + predicted_aggregate) / total);
}

std::vector<std::vector<double>> AggregatedTerms::stage_terms() const {
  std::vector<std::vector<double>> d(mu_term.size());
  for (std::size_t t = 0; t < mu_term.size(); ++t) {
    d[t] = {mu_term[t] + lambda_term[t]};
  }
  return d;
}

AggregatedTerms aggregate_dual_terms(
    const MultiplierVector& m, const std::vector<std::vector<double>>& a_tilde,
    const std::vector<std::vector<double>>& b_tilde) {
  if (a_tilde.size() != b_tilde.size()) {
    throw ConfigError("coefficient tables cover different stage counts");
  }
  AggregatedTerms out;
  out.mu_term.resize(a_tilde.size(), 0.0);
  out.lambda_term.resize(b_tilde.size(), 0.0);
  for (std::size_t t = 0; t < a_tilde.size(); ++t) {
    if (a_tilde[t].size() != m.mu.size() ||
        b_tilde[t].size() != m.lambda.size()) {
      throw ConfigError("coefficient table width does not match multipliers");
    }
    for (std::size_t j = 0; j < m.mu.size(); ++j) {
      out.mu_term[t] += m.mu[j] * a_tilde[t][j];
    }
    for (std::size_t k = 0; k < m.lambda.size(); ++k) {
      out.lambda_term[t] += m.lambda[k] * b_tilde[t][k];
    }
  }
  return out;
}

AggregatedTerms aggregate_dual_terms(const InstanceConstraints& constraints,
                                     const MultiplierVector& m) {
  if (!constraints.scalar_stages()) {
    throw ConfigError("per-stage aggregation needs one-dimensional stages");
  }
  const std::size_t T = static_cast<std::size_t>(constraints.T);
  std::vector<std::vector<double>> a_tilde(
      T, std::vector<double>(constraints.coupling.inequalities.size(), 0.0));
  std::vector<std::vector<double>> b_tilde(
      T, std::vector<double>(constraints.coupling.equalities.size(), 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < constraints.coupling.inequalities.size(); ++j) {
      a_tilde[t][j] =
          constraints.coupling.inequalities[j].coeff(static_cast<int>(t), 0);
    }
    for (std::size_t k = 0; k < constraints.coupling.equalities.size(); ++k) {
      b_tilde[t][k] =
          constraints.coupling.equalities[k].coeff(static_cast<int>(t), 0);
    }
  }
  return aggregate_dual_terms(m, a_tilde, b_tilde);
}

}  // namespace oddo
