#pragma once

#include <string>
#include <vector>

namespace oddo {

// Scalar building block for separable stage costs.  All three kinds are
// convex; Power and Exponential are increasing on their working domain
// (y >= 0 for Power, all of R for Exponential), which is what the regret
// bounds assume.
enum class BaseKind { Power, Exponential, Square };

struct BaseFunction {
  BaseKind kind = BaseKind::Square;
  double K = 1.0;  // positive scale (Power: K*y^c, Exponential: K*e^y)
  double c = 2.0;  // exponent, > 1, Power only

  double value(double y) const;
  double gradient(double y) const;
  // Inverse of the gradient map.  Power: (delta/(c*K))^(1/(c-1)), delta >= 0.
  // Exponential: ln(delta/K), delta > 0 (hard error otherwise, so that a bad
  // multiplier prediction surfaces instead of being silently clamped).
  // Square: delta/2.
  double inverse_gradient(double delta) const;
  // value(inverse_gradient(delta)) in closed form.  Keeps the bound
  // identities exact: Power gives K*(delta/(c*K))^(c/(c-1)), Exponential
  // collapses to delta, Square to delta^2/4.
  double value_at_inverse_gradient(double delta) const;
  void validate() const;
};

std::string to_string(BaseKind kind);

// Per-stage cost function.
//
//   Quadratic:     f(x) = sum_i (p_i + x_i)^2 + offset
//   ScaledShifted: f(x) = a * base(x/a + b) + offset, scalar x, a > 0
//   Linear:        f(x) = dot(c, x) + offset
//
// `offset` is an additive constant.  It never affects gradients, argmins,
// multipliers or regret bounds (it cancels in every difference); it only
// shifts reported objective values, which lets generators reproduce costs
// given in expanded form such as x^2 + Y*x exactly.
enum class CostKind { Quadratic, ScaledShifted, Linear };

struct CostFunction {
  CostKind kind = CostKind::Quadratic;
  std::vector<double> p;      // Quadratic shifts, one per coordinate
  BaseFunction base;          // ScaledShifted
  double a = 1.0;             // ScaledShifted scale, > 0
  double b = 0.0;             // ScaledShifted shift
  std::vector<double> c_lin;  // Linear coefficients
  double offset = 0.0;

  int dimension() const;
  double value(const std::vector<double>& x) const;
  std::vector<double> gradient(const std::vector<double>& x) const;
  // True for the strictly convex kinds (Quadratic, ScaledShifted).
  bool strictly_convex() const;
  // Scalar helpers for one-dimensional stages.
  double scalar_value(double x) const;
  double scalar_gradient(double x) const;
  bool has_inverse_gradient() const;
  double inverse_gradient(double delta) const;
  double value_at_inverse_gradient(double delta) const;
  void validate() const;

  static CostFunction quadratic(std::vector<double> p, double offset = 0.0);
  static CostFunction scaled_shifted(BaseFunction base, double a, double b,
                                     double offset = 0.0);
  static CostFunction linear(std::vector<double> c, double offset = 0.0);
};

std::string to_string(CostKind kind);

}  // namespace oddo
