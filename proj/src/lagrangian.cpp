#include "oddo/lagrangian.hpp"

#include <algorithm>
#include <string>

#include "oddo/errors.hpp"

namespace oddo {

std::vector<std::vector<double>> dual_linear_terms(
    const InstanceConstraints& constraints, const MultiplierVector& m) {
  const auto& cp = constraints.coupling;
  if (m.mu.size() != cp.inequalities.size() ||
      m.lambda.size() != cp.equalities.size())
    throw ConfigError("multiplier vector does not match the coupling rows");
  std::vector<std::vector<double>> d(constraints.T);
  for (int t = 0; t < constraints.T; ++t)
    d[t].assign(constraints.dimension(t), 0.0);
  auto accumulate = [&](const LinearCoupling& row, double weight) {
    if (weight == 0.0) return;
    const int n = std::min<int>(constraints.T, row.coeffs.size());
    for (int t = 0; t < n; ++t) {
      const auto& a = row.coeffs[t];
      for (size_t i = 0; i < a.size(); ++i) d[t][i] += weight * a[i];
    }
  };
  for (size_t j = 0; j < cp.inequalities.size(); ++j)
    accumulate(cp.inequalities[j], m.mu[j]);
  for (size_t k = 0; k < cp.equalities.size(); ++k)
    accumulate(cp.equalities[k], m.lambda[k]);
  return d;
}

std::vector<std::vector<double>> nu_values(const InstanceConstraints& constraints,
                                           const MultiplierVector& m) {
  auto d = dual_linear_terms(constraints, m);
  for (auto& stage : d)
    for (auto& v : stage) v = -v;
  return d;
}

double nu(const InstanceConstraints& constraints, const MultiplierVector& m,
          int t) {
  if (t < 0 || t >= constraints.T) throw ConfigError("stage index out of range");
  if (constraints.dimension(t) != 1)
    throw ConfigError("nu(t) is defined for one-dimensional stages");
  return nu_values(constraints, m)[t][0];
}

double local_lagrangian_value(const ProblemInstance& instance, int t,
                              const std::vector<double>& x_t,
                              const MultiplierVector& m) {
  if (t < 0 || t >= instance.T()) throw ConfigError("stage index out of range");
  const auto d = dual_linear_terms(instance.constraints, m);
  double value = instance.costs[t].value(x_t);
  for (size_t i = 0; i < x_t.size(); ++i) value += d[t][i] * x_t[i];
  return value;
}

double local_solution_1d(const CostFunction& f, double l, double u, double d) {
  if (f.kind == CostKind::Linear) {
    // min (c + d) * x over [l, u]; ties break to the lower bound.
    return (f.c_lin[0] + d < 0.0) ? u : l;
  }
  return std::clamp(f.inverse_gradient(-d), l, u);
}

std::vector<double> local_lagrangian_solution(const ProblemInstance& instance,
                                              int t, const MultiplierVector& m) {
  if (t < 0 || t >= instance.T()) throw ConfigError("stage index out of range");
  const auto d = dual_linear_terms(instance.constraints, m);
  const auto& f = instance.costs[t];
  const auto& box = instance.constraints.stages[t];
  const int n = box.dimension();
  std::vector<double> x(n);
  switch (f.kind) {
    case CostKind::Quadratic:
      // gradient 2(p_i + x_i) = nu_i  =>  x_i = nu_i/2 - p_i, clipped.
      for (int i = 0; i < n; ++i)
        x[i] = std::clamp(-0.5 * d[t][i] - f.p[i], box.lower[i], box.upper[i]);
      return x;
    case CostKind::ScaledShifted:
      x[0] = std::clamp(f.inverse_gradient(-d[t][0]), box.lower[0],
                        box.upper[0]);
      return x;
    case CostKind::Linear:
      for (int i = 0; i < n; ++i)
        x[i] = (f.c_lin[i] + d[t][i] < 0.0) ? box.upper[i] : box.lower[i];
      return x;
  }
  throw ConfigError("unknown cost kind");
}

std::vector<double> local_lagrangian_solution_linear(
    const ProblemInstance& instance, int t, const MultiplierVector& m) {
  if (t < 0 || t >= instance.T()) throw ConfigError("stage index out of range");
  if (instance.costs[t].kind != CostKind::Linear)
    throw ConfigError("stage cost is not linear");
  return local_lagrangian_solution(instance, t, m);
}

double dual_value(const ProblemInstance& instance, const MultiplierVector& m) {
  double q = 0.0;
  for (int t = 0; t < instance.T(); ++t)
    q += local_lagrangian_value(instance, t,
                                local_lagrangian_solution(instance, t, m), m);
  const auto& cp = instance.constraints.coupling;
  for (size_t j = 0; j < cp.inequalities.size(); ++j)
    q -= m.mu[j] * cp.inequalities[j].rhs;
  for (size_t k = 0; k < cp.equalities.size(); ++k)
    q -= m.lambda[k] * cp.equalities[k].rhs;
  return q;
}

}  // namespace oddo
