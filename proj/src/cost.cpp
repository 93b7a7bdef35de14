#include "oddo/cost.hpp"

#include <cmath>
#include <string>

#include "oddo/errors.hpp"

namespace oddo {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

double BaseFunction::value(double y) const {
  switch (kind) {
    case BaseKind::Power:
      if (y < 0.0) throw DomainError("power base evaluated at y < 0");
      return K * std::pow(y, c);
    case BaseKind::Exponential:
      return K * std::exp(y);
    case BaseKind::Square:
      return y * y;
  }
  throw ConfigError("unknown base kind");
}

double BaseFunction::gradient(double y) const {
  switch (kind) {
    case BaseKind::Power:
      if (y < 0.0) throw DomainError("power base gradient at y < 0");
      return c * K * std::pow(y, c - 1.0);
    case BaseKind::Exponential:
      return K * std::exp(y);
    case BaseKind::Square:
      return 2.0 * y;
  }
  throw ConfigError("unknown base kind");
}

double BaseFunction::inverse_gradient(double delta) const {
  switch (kind) {
    case BaseKind::Power:
      if (c <= 1.0)
        throw DomainError("power base with c <= 1 has no inverse gradient");
      if (delta < 0.0)
        throw DomainError("power base inverse gradient needs delta >= 0, got " +
                          std::to_string(delta));
      return std::pow(delta / (c * K), 1.0 / (c - 1.0));
    case BaseKind::Exponential:
      if (delta <= 0.0)
        throw DomainError(
            "exponential base inverse gradient needs delta > 0, got " +
            std::to_string(delta));
      return std::log(delta / K);
    case BaseKind::Square:
      return 0.5 * delta;
  }
  throw ConfigError("unknown base kind");
}

double BaseFunction::value_at_inverse_gradient(double delta) const {
  switch (kind) {
    case BaseKind::Power: {
      if (c <= 1.0)
        throw DomainError("power base with c <= 1 has no inverse gradient");
      if (delta < 0.0)
        throw DomainError("power base inverse gradient needs delta >= 0, got " +
                          std::to_string(delta));
      return K * std::pow(delta / (c * K), c / (c - 1.0));
    }
    case BaseKind::Exponential:
      // K * exp(ln(delta/K)) = delta; the scale drops out.
      if (delta <= 0.0)
        throw DomainError(
            "exponential base inverse gradient needs delta > 0, got " +
            std::to_string(delta));
      return delta;
    case BaseKind::Square:
      return 0.25 * delta * delta;
  }
  throw ConfigError("unknown base kind");
}

void BaseFunction::validate() const {
  switch (kind) {
    case BaseKind::Power:
      require(K > 0.0, "power base needs K > 0");
      require(c >= 1.0, "power base needs c >= 1");
      break;
    case BaseKind::Exponential:
      require(K > 0.0, "exponential base needs K > 0");
      break;
    case BaseKind::Square:
      break;
  }
}

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::Power:
      return "power";
    case BaseKind::Exponential:
      return "exponential";
    case BaseKind::Square:
      return "square";
  }
  return "?";
}

int CostFunction::dimension() const {
  switch (kind) {
    case CostKind::Quadratic:
      return static_cast<int>(p.size());
    case CostKind::ScaledShifted:
      return 1;
    case CostKind::Linear:
      return static_cast<int>(c_lin.size());
  }
  return 0;
}

double CostFunction::value(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dimension())
    throw ConfigError("cost evaluated at wrong dimension");
  switch (kind) {
    case CostKind::Quadratic: {
      double s = offset;
      for (size_t i = 0; i < x.size(); ++i) {
        const double d = p[i] + x[i];
        s += d * d;
      }
      return s;
    }
    case CostKind::ScaledShifted:
      return a * base.value(x[0] / a + b) + offset;
    case CostKind::Linear: {
      double s = offset;
      for (size_t i = 0; i < x.size(); ++i) s += c_lin[i] * x[i];
      return s;
    }
  }
  throw ConfigError("unknown cost kind");
}

std::vector<double> CostFunction::gradient(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dimension())
    throw ConfigError("cost gradient at wrong dimension");
  std::vector<double> g(x.size());
  switch (kind) {
    case CostKind::Quadratic:
      for (size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * (p[i] + x[i]);
      return g;
    case CostKind::ScaledShifted:
      // d/dx [a * base(x/a + b)] = base'(x/a + b)
      g[0] = base.gradient(x[0] / a + b);
      return g;
    case CostKind::Linear:
      return c_lin;
  }
  throw ConfigError("unknown cost kind");
}

bool CostFunction::strictly_convex() const {
  return kind == CostKind::Quadratic || kind == CostKind::ScaledShifted;
}

double CostFunction::scalar_value(double x) const { return value({x}); }

double CostFunction::scalar_gradient(double x) const {
  if (dimension() != 1) throw ConfigError("scalar gradient of a vector cost");
  return gradient({x})[0];
}

bool CostFunction::has_inverse_gradient() const {
  switch (kind) {
    case CostKind::Quadratic:
      return dimension() == 1;
    case CostKind::ScaledShifted:
      return !(base.kind == BaseKind::Power && base.c <= 1.0);
    case CostKind::Linear:
      return false;
  }
  return false;
}

double CostFunction::inverse_gradient(double delta) const {
  switch (kind) {
    case CostKind::Quadratic:
      if (dimension() != 1)
        throw DomainError("inverse gradient of a vector quadratic");
      return 0.5 * delta - p[0];
    case CostKind::ScaledShifted:
      // gradient is base'(x/a + b), so x = a * (inv_base_grad(delta) - b)
      return a * (base.inverse_gradient(delta) - b);
    case CostKind::Linear:
      throw DomainError("linear cost has no inverse gradient");
  }
  throw ConfigError("unknown cost kind");
}

double CostFunction::value_at_inverse_gradient(double delta) const {
  switch (kind) {
    case CostKind::Quadratic:
      if (dimension() != 1)
        throw DomainError("inverse gradient of a vector quadratic");
      // (p + delta/2 - p)^2 = delta^2/4
      return 0.25 * delta * delta + offset;
    case CostKind::ScaledShifted:
      // a * base(inv_base_grad(delta)); the shift b drops out.
      return a * base.value_at_inverse_gradient(delta) + offset;
    case CostKind::Linear:
      throw DomainError("linear cost has no inverse gradient");
  }
  throw ConfigError("unknown cost kind");
}

void CostFunction::validate() const {
  switch (kind) {
    case CostKind::Quadratic:
      require(!p.empty(), "quadratic cost needs at least one coordinate");
      break;
    case CostKind::ScaledShifted:
      base.validate();
      require(a > 0.0, "scaled-shifted cost needs a > 0");
      break;
    case CostKind::Linear:
      require(!c_lin.empty(), "linear cost needs at least one coordinate");
      break;
  }
}

CostFunction CostFunction::quadratic(std::vector<double> p, double offset) {
  CostFunction f;
  f.kind = CostKind::Quadratic;
  f.p = std::move(p);
  f.offset = offset;
  return f;
}

CostFunction CostFunction::scaled_shifted(BaseFunction base, double a, double b,
                                          double offset) {
  CostFunction f;
  f.kind = CostKind::ScaledShifted;
  f.base = base;
  f.a = a;
  f.b = b;
  f.offset = offset;
  return f;
}

CostFunction CostFunction::linear(std::vector<double> c, double offset) {
  CostFunction f;
  f.kind = CostKind::Linear;
  f.c_lin = std::move(c);
  f.offset = offset;
  return f;
}

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::Quadratic:
      return "quadratic";
    case CostKind::ScaledShifted:
      return "scaled_shifted";
    case CostKind::Linear:
      return "linear";
  }
  return "?";
}

}  // namespace oddo
