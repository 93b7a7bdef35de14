#pragma once

#include <vector>

#include "oddo/model.hpp"

namespace oddo {

// Linear dual pressure on each stage coordinate:
//   d[t][i] = sum_j mu_j * a^t_{j,i} + sum_k lambda_k * b^t_{k,i},
// i.e. the coefficient the dualized coupling rows add to the stage cost.
std::vector<std::vector<double>> dual_linear_terms(
    const InstanceConstraints& constraints, const MultiplierVector& m);

// nu[t][i] = -d[t][i]; the local Lagrangian minimizer solves
// gradient(f^t) = nu^t before clipping to the box.
std::vector<std::vector<double>> nu_values(const InstanceConstraints& constraints,
                                           const MultiplierVector& m);

// Scalar-stage convenience: nu at stage t (stage must be one-dimensional).
double nu(const InstanceConstraints& constraints, const MultiplierVector& m,
          int t);

// L^t(x^t, mu, lambda) = f^t(x^t) + dot(d[t], x^t).  The constant rhs shares
// are accounted for once in dual_value, not here.
double local_lagrangian_value(const ProblemInstance& instance, int t,
                              const std::vector<double>& x_t,
                              const MultiplierVector& m);

// argmin of L^t over the stage box.  Strictly convex kinds: clip of the
// inverse gradient at nu^t (hard DomainError when nu^t leaves the inverse
// gradient's domain, e.g. nu <= 0 for exponential costs -- bad predictions
// surface instead of being clamped).  Linear kinds: per-coordinate bound
// selection by the sign of c_i + d_i, ties (zero coefficient) to the lower
// bound.
std::vector<double> local_lagrangian_solution(const ProblemInstance& instance,
                                              int t, const MultiplierVector& m);

// Linear-cost-only variant: per coordinate, reduced cost c_i + d_i < 0 picks
// the upper bound, otherwise (including exact zero) the lower bound.  Rejects
// non-linear stage costs so callers cannot silently hit the wrong rule.
std::vector<double> local_lagrangian_solution_linear(
    const ProblemInstance& instance, int t, const MultiplierVector& m);

// One coordinate of the local solve, reusable by the RAP solver:
// argmin over [l, u] of f(x) + d*x for a one-dimensional cost.
double local_solution_1d(const CostFunction& f, double l, double u, double d);

// Dual function q(mu, lambda) = sum_t min_x L^t - dot(mu, rhs_ineq)
//                                              - dot(lambda, rhs_eq).
double dual_value(const ProblemInstance& instance, const MultiplierVector& m);

}  // namespace oddo
