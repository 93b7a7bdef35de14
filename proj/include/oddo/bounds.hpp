#pragma once

#include <vector>

#include "oddo/cost.hpp"
#include "oddo/model.hpp"

namespace oddo {

// Component-wise m_hat <= m_star (the under-prediction premise of the regret
// bound; equality allowed).
bool check_underprediction(const MultiplierVector& m_hat,
                           const MultiplierVector& m_star);

// Regret bound for under-predicted multipliers on structured instances with
// increasing strictly convex costs:
//   sum_t f^t(inv_grad(nu^t(m_hat))) - sum_t f^t(inv_grad(nu^t(m_star))),
// with the inverse gradients deliberately unclipped.  Scalar stages only;
// nu values outside an inverse-gradient domain raise DomainError.
double theorem1_bound(const ProblemInstance& instance,
                      const MultiplierVector& m_hat,
                      const MultiplierVector& m_star);

// Same bound for costs of the form a^t * base^t(x/a^t + b^t): the b^t drop
// out, so the bound is computable without knowing the cost shifts.
double separable_bound(const std::vector<BaseFunction>& bases,
                       const std::vector<double>& a,
                       const InstanceConstraints& constraints,
                       const MultiplierVector& m_hat,
                       const MultiplierVector& m_star);

// Closed forms of the separable bound for uniform power/exponential bases,
// taking the nu values directly.
//   power: K * (1/(c*K))^(c/(c-1)) * (sum a*nu_hat^(c/(c-1)) - sum a*nu_star^...)
//   exp:   sum a*nu_hat - sum a*nu_star   (scale-free)
double power_bound(double K, double c, const std::vector<double>& a,
                   const std::vector<double>& nu_hat,
                   const std::vector<double>& nu_star);
double exp_bound(const std::vector<double>& a,
                 const std::vector<double>& nu_hat,
                 const std::vector<double>& nu_star);

// Bound paired with the realized online-offline gap.  premise_satisfied
// requires: a structured instance whose materialized capacity rows are
// upper-only (no lower interval sides), increasing costs, and component-wise
// under-prediction.  When nu values leave the inverse-gradient domain the
// bound is reported as NaN with the premise cleared.
struct BoundReport {
  double bound_value = 0.0;
  double realized_gap = 0.0;
  bool premise_satisfied = false;
};

BoundReport make_bound_report(const ProblemInstance& instance,
                              const MultiplierVector& m_hat,
                              const MultiplierVector& m_star,
                              double online_objective,
                              double offline_objective);

}  // namespace oddo
