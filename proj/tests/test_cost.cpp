#include <doctest.h>

#include <cmath>

#include "oddo/cost.hpp"
#include "oddo/errors.hpp"

using namespace oddo;

TEST_CASE("power base: value, gradient, and exact gradient inverse") {
  BaseFunction f;
  f.kind = BaseKind::Power;
  f.K = 2.0;
  f.c = 3.0;

  CHECK(f.value(2.0) == doctest::Approx(16.0));
  CHECK(f.gradient(2.0) == doctest::Approx(24.0));
  CHECK(f.inverse_gradient(24.0) == doctest::Approx(2.0));
  CHECK(f.value_at_inverse_gradient(24.0) ==
        doctest::Approx(f.value(f.inverse_gradient(24.0))));

  CHECK_THROWS_AS(f.value(-0.5), DomainError);
  CHECK_THROWS_AS(f.inverse_gradient(-1.0), DomainError);
}

TEST_CASE("exponential base: inverse gradient defined only for delta > 0") {
  BaseFunction f;
  f.kind = BaseKind::Exponential;
  f.K = 3.0;

  CHECK(f.value(0.0) == doctest::Approx(3.0));
  CHECK(f.gradient(1.0) == doctest::Approx(3.0 * std::exp(1.0)));
  CHECK(f.inverse_gradient(3.0) == doctest::Approx(0.0));
  // K * exp(ln(delta/K)) collapses to delta itself.
  CHECK(f.value_at_inverse_gradient(7.5) == doctest::Approx(7.5));

  CHECK_THROWS_AS(f.inverse_gradient(0.0), DomainError);
  CHECK_THROWS_AS(f.inverse_gradient(-2.0), DomainError);
}

TEST_CASE("square base round trip") {
  BaseFunction f;
  f.kind = BaseKind::Square;
  CHECK(f.value(-3.0) == doctest::Approx(9.0));
  CHECK(f.gradient(4.0) == doctest::Approx(8.0));
  CHECK(f.inverse_gradient(8.0) == doctest::Approx(4.0));
  CHECK(f.value_at_inverse_gradient(8.0) == doctest::Approx(16.0));
}

TEST_CASE("base validation rejects non-positive scales and flat powers") {
  BaseFunction f;
  f.kind = BaseKind::Power;
  f.K = 0.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f.K = 1.0;
  f.c = 0.5;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f.c = 2.0;
  CHECK_NOTHROW(f.validate());
}

TEST_CASE("quadratic cost (p + x)^2 with an additive offset") {
  const CostFunction f = CostFunction::quadratic({1.0, -2.0}, 5.0);
  CHECK(f.dimension() == 2);
  CHECK(f.strictly_convex());
  // (1+2)^2 + (-2+3)^2 + 5
  CHECK(f.value({2.0, 3.0}) == doctest::Approx(15.0));
  const auto g = f.gradient({2.0, 3.0});
  CHECK(g[0] == doctest::Approx(6.0));
  CHECK(g[1] == doctest::Approx(2.0));

  // The offset shifts values only, never gradients.
  const CostFunction plain = CostFunction::quadratic({1.0, -2.0});
  CHECK(f.value({2.0, 3.0}) - plain.value({2.0, 3.0}) == doctest::Approx(5.0));
  CHECK(f.gradient({2.0, 3.0}) == plain.gradient({2.0, 3.0}));
}

TEST_CASE("scalar quadratic inverse gradient solves 2(p + x) = delta") {
  const CostFunction f = CostFunction::quadratic({5.0});
  CHECK(f.has_inverse_gradient());
  CHECK(f.inverse_gradient(0.0) == doctest::Approx(-5.0));
  CHECK(f.inverse_gradient(4.0) == doctest::Approx(-3.0));
  CHECK(f.scalar_gradient(f.inverse_gradient(4.0)) == doctest::Approx(4.0));
  CHECK(f.value_at_inverse_gradient(4.0) ==
        doctest::Approx(f.scalar_value(f.inverse_gradient(4.0))));

  const CostFunction vec = CostFunction::quadratic({1.0, 2.0});
  CHECK(!vec.has_inverse_gradient());
  CHECK_THROWS_AS(vec.inverse_gradient(1.0), DomainError);
}

TEST_CASE("scaled-shifted cost a * base(x/a + b)") {
  BaseFunction sq;
  sq.kind = BaseKind::Square;
  const CostFunction f = CostFunction::scaled_shifted(sq, 2.0, 1.0);
  // 2 * (3/2 + 1)^2
  CHECK(f.scalar_value(3.0) == doctest::Approx(12.5));
  // d/dx = base'(x/a + b) = 2 * (3/2 + 1)
  CHECK(f.scalar_gradient(3.0) == doctest::Approx(5.0));
  CHECK(f.inverse_gradient(5.0) == doctest::Approx(3.0));
  // The shift b cancels in value_at_inverse_gradient.
  const CostFunction shifted = CostFunction::scaled_shifted(sq, 2.0, -4.0);
  CHECK(f.value_at_inverse_gradient(5.0) ==
        doctest::Approx(shifted.value_at_inverse_gradient(5.0)));
}

TEST_CASE("linear cost has no curvature to invert") {
  const CostFunction f = CostFunction::linear({1.5, -2.0}, 1.0);
  CHECK(!f.strictly_convex());
  CHECK(!f.has_inverse_gradient());
  CHECK(f.value({2.0, 1.0}) == doctest::Approx(2.0));
  CHECK(f.gradient({0.0, 0.0}) == std::vector<double>{1.5, -2.0});
  CHECK_THROWS_AS(f.inverse_gradient(1.0), DomainError);
}

TEST_CASE("cost validation and dimension checks") {
  CHECK_THROWS_AS(CostFunction::quadratic({}).validate(), ConfigError);
  CHECK_THROWS_AS(CostFunction::linear({}).validate(), ConfigError);
  BaseFunction sq;
  sq.kind = BaseKind::Square;
  CHECK_THROWS_AS(CostFunction::scaled_shifted(sq, 0.0, 0.0).validate(),
                  ConfigError);
  const CostFunction f = CostFunction::quadratic({1.0});
  CHECK_THROWS_AS(f.value({1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(f.gradient({}), ConfigError);
}
