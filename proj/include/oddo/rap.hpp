#pragma once

#include <vector>

#include "oddo/cost.hpp"

namespace oddo {

// Resource allocation problem: min sum_i f_i(x_i) subject to sum_i x_i = R
// and l_i <= x_i <= u_i, with strictly convex one-dimensional costs.
//
// Solved by bisection on the equality multiplier lambda: the per-coordinate
// minimizer x_i(lambda) = clip(inverse_gradient_i(-lambda), l_i, u_i) makes
// g(lambda) = sum_i x_i(lambda) continuous and non-increasing, so the root of
// g(lambda) = R is bracketed by the gradient values at the box corners
// (expanded by doubling if numerics ever leave the corner bracket) and
// bisected until |g(lambda) - R| <= 1e-10 * max(1, |R|).
struct RapSolution {
  std::vector<double> x;
  double lambda = 0.0;
};

RapSolution solve_rap(const std::vector<CostFunction>& costs,
                      const std::vector<double>& lower,
                      const std::vector<double>& upper, double R);

}  // namespace oddo
