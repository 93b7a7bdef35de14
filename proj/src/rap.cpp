#include "oddo/rap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oddo/errors.hpp"

namespace oddo {

namespace {

double clipped_solution(const CostFunction& f, double l, double u,
                        double lambda) {
  // Minimizer of f(x) + lambda * x over [l, u].  Inside the corner bracket
  // -lambda stays within [grad(l), grad(u)], the inverse gradient's range.
  return std::clamp(f.inverse_gradient(-lambda), l, u);
}

}  // namespace

RapSolution solve_rap(const std::vector<CostFunction>& costs,
                      const std::vector<double>& lower,
                      const std::vector<double>& upper, double R) {
  const size_t n = costs.size();
  if (n == 0 || lower.size() != n || upper.size() != n)
    throw ConfigError("solve_rap: inconsistent sizes");
  double sum_l = 0.0, sum_u = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!costs[i].strictly_convex() || costs[i].dimension() != 1)
      throw ConfigError("solve_rap needs strictly convex scalar costs");
    if (lower[i] > upper[i]) throw ConfigError("solve_rap: box with l > u");
    sum_l += lower[i];
    sum_u += upper[i];
  }
  const double feas_tol = 1e-9 * std::max({1.0, std::abs(sum_l), std::abs(sum_u)});
  if (R < sum_l - feas_tol || R > sum_u + feas_tol)
    throw InfeasibleError("solve_rap: resource target " + std::to_string(R) +
                          " outside [" + std::to_string(sum_l) + ", " +
                          std::to_string(sum_u) + "]");
  R = std::clamp(R, sum_l, sum_u);

  // Corner bracket: at lambda_lo every coordinate sits at its upper bound
  // (g = sum u >= R), at lambda_hi at its lower bound (g = sum l <= R).
  double lambda_lo = std::numeric_limits<double>::infinity();
  double lambda_hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    lambda_lo = std::min(lambda_lo, -costs[i].scalar_gradient(upper[i]));
    lambda_hi = std::max(lambda_hi, -costs[i].scalar_gradient(lower[i]));
  }

  auto g = [&](double lambda) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
      s += clipped_solution(costs[i], lower[i], upper[i], lambda);
    return s;
  };

  // Guard expansion by doubling; mathematically the corner bracket already
  // encloses the root.
  double step = std::max(1.0, lambda_hi - lambda_lo);
  for (int k = 0; k < 64 && g(lambda_lo) < R; ++k, step *= 2.0)
    lambda_lo -= step;
  step = std::max(1.0, lambda_hi - lambda_lo);
  for (int k = 0; k < 64 && g(lambda_hi) > R; ++k, step *= 2.0)
    lambda_hi += step;

  const double tol = 1e-10 * std::max(1.0, std::abs(R));
  double lambda = lambda_lo;
  double resid = g(lambda) - R;
  if (std::abs(resid) > tol) {
    if (std::abs(g(lambda_hi) - R) <= tol) {
      lambda = lambda_hi;
      resid = g(lambda) - R;
    } else {
      for (int it = 0; it < 500; ++it) {
        lambda = 0.5 * (lambda_lo + lambda_hi);
        resid = g(lambda) - R;
        if (std::abs(resid) <= tol) break;
        if (resid > 0.0)
          lambda_lo = lambda;  // g too large: increase lambda
        else
          lambda_hi = lambda;
        if (lambda_hi - lambda_lo <=
            1e-16 * std::max(1.0, std::abs(lambda_lo) + std::abs(lambda_hi)))
          break;
      }
    }
  }
  if (std::abs(resid) > 1e3 * tol)
    throw SolverError("solve_rap bisection did not converge: residual " +
                      std::to_string(resid));

  RapSolution sol;
  sol.lambda = lambda;
  sol.x.resize(n);
  for (size_t i = 0; i < n; ++i)
    sol.x[i] = clipped_solution(costs[i], lower[i], upper[i], lambda);
  return sol;
}

}  // namespace oddo
