#include "oddo/bounds.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "oddo/errors.hpp"
#include "oddo/lagrangian.hpp"

namespace oddo {

bool check_underprediction(const MultiplierVector& m_hat,
                           const MultiplierVector& m_star) {
  if (m_hat.mu.size() != m_star.mu.size() ||
      m_hat.lambda.size() != m_star.lambda.size()) {
    throw ConfigError("multiplier vectors have different dimensions");
  }
  for (std::size_t j = 0; j < m_hat.mu.size(); ++j) {
    if (m_hat.mu[j] > m_star.mu[j]) return false;
  }
  for (std::size_t k = 0; k < m_hat.lambda.size(); ++k) {
    if (m_hat.lambda[k] > m_star.lambda[k]) return false;
  }
  return true;
}

double theorem1_bound(const ProblemInstance& instance,
                      const MultiplierVector& m_hat,
                      const MultiplierVector& m_star) {
  const InstanceConstraints& con = instance.constraints;
  if (!con.scalar_stages()) {
    throw ConfigError("the regret bound is defined for one-dimensional stages");
  }
  const std::vector<std::vector<double>> nu_hat = nu_values(con, m_hat);
  const std::vector<std::vector<double>> nu_star = nu_values(con, m_star);
  double bound = 0.0;
  for (int t = 0; t < con.T; ++t) {
    const CostFunction& f = instance.costs[static_cast<std::size_t>(t)];
    if (!f.has_inverse_gradient()) {
      throw ConfigError("stage cost has no invertible gradient");
    }
    bound += f.value_at_inverse_gradient(
                 nu_hat[static_cast<std::size_t>(t)][0]) -
             f.value_at_inverse_gradient(
                 nu_star[static_cast<std::size_t>(t)][0]);
  }
  return bound;
}

double separable_bound(const std::vector<BaseFunction>& bases,
                       const std::vector<double>& a,
                       const InstanceConstraints& constraints,
                       const MultiplierVector& m_hat,
                       const MultiplierVector& m_star) {
  if (static_cast<int>(bases.size()) != constraints.T ||
      a.size() != bases.size()) {
    throw ConfigError("base/scale arrays must cover every stage");
  }
  if (!constraints.scalar_stages()) {
    throw ConfigError("the regret bound is defined for one-dimensional stages");
  }
  const std::vector<std::vector<double>> nu_hat = nu_values(constraints, m_hat);
  const std::vector<std::vector<double>> nu_star =
      nu_values(constraints, m_star);
  double bound = 0.0;
  for (int t = 0; t < constraints.T; ++t) {
    const std::size_t s = static_cast<std::size_t>(t);
    if (a[s] <= 0.0) throw ConfigError("scale coefficients must be positive");
    bound += a[s] * (bases[s].value_at_inverse_gradient(nu_hat[s][0]) -
                     bases[s].value_at_inverse_gradient(nu_star[s][0]));
  }
  return bound;
}

double power_bound(double K, double c, const std::vector<double>& a,
                   const std::vector<double>& nu_hat,
                   const std::vector<double>& nu_star) {
  if (K <= 0.0) throw ConfigError("power scale K must be positive");
  if (c <= 1.0) {
    throw ConfigError("power exponent must exceed 1 (bound exponent singular)");
  }
  if (a.size() != nu_hat.size() || a.size() != nu_star.size()) {
    throw ConfigError("bound arrays have different lengths");
  }
  const double q = c / (c - 1.0);
  double hat = 0.0, star = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (nu_hat[t] <= 0.0 || nu_star[t] <= 0.0) {
      throw DomainError("power bound needs positive nu values");
    }
    hat += a[t] * std::pow(nu_hat[t], q);
    star += a[t] * std::pow(nu_star[t], q);
  }
  return K * std::pow(1.0 / (c * K), q) * (hat - star);
}

double exp_bound(const std::vector<double>& a,
                 const std::vector<double>& nu_hat,
                 const std::vector<double>& nu_star) {
  if (a.size() != nu_hat.size() || a.size() != nu_star.size()) {
    throw ConfigError("bound arrays have different lengths");
  }
  double bound = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (nu_hat[t] <= 0.0 || nu_star[t] <= 0.0) {
      throw DomainError("exponential bound needs positive nu values");
    }
    bound += a[t] * (nu_hat[t] - nu_star[t]);
  }
  return bound;
}

namespace {

// The bound's constraint premise: every materialized capacity row caps a
// subset sum from above with unit coefficients (no pinned lower sides, which
// would flip the monotonicity the proof relies on).
bool upper_only_structure(const InstanceStructure& st) {
  if (st.kind != StructureKind::Rap && st.kind != StructureKind::Laminar) {
    return false;
  }
  for (const SetCapacity& sc : st.sets) {
    if (sc.lo > -kNoBound / 2) return false;
  }
  return true;
}

}  // namespace

BoundReport make_bound_report(const ProblemInstance& instance,
                              const MultiplierVector& m_hat,
                              const MultiplierVector& m_star,
                              double online_objective,
                              double offline_objective) {
  BoundReport rep;
  rep.realized_gap = online_objective - offline_objective;
  rep.premise_satisfied =
      upper_only_structure(instance.constraints.structure) &&
      instance.constraints.structure.increasing_costs &&
      check_underprediction(m_hat, m_star);
  try {
    rep.bound_value = theorem1_bound(instance, m_hat, m_star);
  } catch (const DomainError&) {
    rep.bound_value = std::numeric_limits<double>::quiet_NaN();
    rep.premise_satisfied = false;
  }
  return rep;
}

}  // namespace oddo
