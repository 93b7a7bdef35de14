#include <doctest.h>

#include <vector>

#include "oddo/errors.hpp"
#include "oddo/lagrangian.hpp"
#include "oddo/model.hpp"
#include "oddo/offline.hpp"
#include "oddo/problems.hpp"

using namespace oddo;

namespace {

ProblemInstance battery_toy() {
  BatteryParams params;
  params.T = 3;
  params.dt = 1.0;
  params.l = {-2.0, -2.0, -2.0};
  params.u = {2.0, 2.0, 2.0};
  params.C_lo = {-5.0, -5.0};
  params.C_hi = {5.0, 5.0};
  params.C_end = 0.0;
  params.p = {1.0, 1.0, 1.0};
  return build_battery_instance(params);
}

ProblemInstance linear_stage_box() {
  ProblemInstance inst;
  inst.constraints.T = 1;
  StageSet stage;
  stage.lower = {0.0, 0.0, 0.0};
  stage.upper = {567.0, 567.0, 567.0};
  inst.constraints.stages = {stage};
  inst.costs = {CostFunction::linear({1.0, -1.0, 0.0})};
  return inst;
}

}  // namespace

TEST_CASE("nu is the negated multiplier-weighted column sum") {
  const ProblemInstance e = three_stage_example();
  MultiplierVector m = MultiplierVector::zeros(e.constraints);
  for (int t = 0; t < 3; ++t) CHECK(nu(e.constraints, m, t) == 0.0);

  m.lambda = {2.0};  // single all-ones equality: nu = -2 at every stage
  for (int t = 0; t < 3; ++t) CHECK(nu(e.constraints, m, t) == -2.0);

  // Chain rows: the first stage sits in every cumulative row, so an
  // upper-band multiplier pattern (1, 0) gives nu = -1 there and leaves the
  // later stages untouched.
  const ProblemInstance battery = battery_toy();
  MultiplierVector bm = MultiplierVector::zeros(battery.constraints);
  bm.mu[0] = 1.0;
  CHECK(nu(battery.constraints, bm, 0) == doctest::Approx(-1.0));
  CHECK(nu(battery.constraints, bm, 1) == doctest::Approx(0.0));
  CHECK(nu(battery.constraints, bm, 2) == doctest::Approx(0.0));

  // Component-wise larger multipliers can only lower nu.
  MultiplierVector larger = bm;
  larger.lambda[0] = 1.5;
  larger.mu[1] = 0.25;
  for (int t = 0; t < 3; ++t)
    CHECK(nu(battery.constraints, larger, t) <= nu(battery.constraints, bm, t));
}

TEST_CASE("local Lagrangian value adds the dualized linear terms to the stage "
          "cost") {
  const ProblemInstance e = three_stage_example();
  MultiplierVector m = MultiplierVector::zeros(e.constraints);
  m.lambda = {2.0};
  // Stage 1 at x = 1: (1 - 4) + 2 = -1.
  CHECK(local_lagrangian_value(e, 0, {1.0}, m) == doctest::Approx(-1.0));

  const MultiplierVector zeros = MultiplierVector::zeros(e.constraints);
  CHECK(local_lagrangian_value(e, 1, {2.0}, zeros) ==
        doctest::Approx(6.0));  // 4 + 2, the bare stage cost
  CHECK(local_lagrangian_value(e, 1, {0.0}, zeros) == doctest::Approx(0.0));
}

TEST_CASE("local Lagrangian solution clips the inverse gradient to the box") {
  const ProblemInstance e = three_stage_example();
  MultiplierVector m = MultiplierVector::zeros(e.constraints);
  m.lambda = {2.0};
  // Stage 1: minimize x^2 - 4x + 2x; unconstrained minimizer 1 lies in [0,6].
  CHECK(local_lagrangian_solution(e, 0, m) == std::vector<double>{1.0});

  CHECK(local_solution_1d(CostFunction::quadratic({0.0}), -1.0, 1.0, 0.0) ==
        doctest::Approx(0.0));
  // (5 + x)^2 has its unconstrained minimum at -5; the box clips it to 0.
  CHECK(local_solution_1d(CostFunction::quadratic({5.0}), 0.0, 6.0, 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("linear stage costs pick bounds by reduced-cost sign with ties to "
          "the lower bound") {
  const ProblemInstance inst = linear_stage_box();
  const MultiplierVector m = MultiplierVector::zeros(inst.constraints);
  const std::vector<double> expect{0.0, 567.0, 0.0};
  CHECK(local_lagrangian_solution_linear(inst, 0, m) == expect);
  CHECK(local_lagrangian_solution(inst, 0, m) == expect);  // same dispatch

  ProblemInstance positive = linear_stage_box();
  positive.costs = {CostFunction::linear({2.0, 0.5, 1.0})};
  CHECK(local_lagrangian_solution_linear(positive, 0, m) ==
        std::vector<double>{0.0, 0.0, 0.0});

  ProblemInstance ties = linear_stage_box();
  ties.costs = {CostFunction::linear({0.0, 0.0, 0.0})};
  CHECK(local_lagrangian_solution_linear(ties, 0, m) ==
        std::vector<double>{0.0, 0.0, 0.0});

  // The strict variant refuses non-linear costs instead of mis-solving them.
  const ProblemInstance e = three_stage_example();
  CHECK_THROWS_AS(
      local_lagrangian_solution_linear(e, 0,
                                       MultiplierVector::zeros(e.constraints)),
      ConfigError);
}

TEST_CASE("dual function: box minima at zero, strong duality at the optimum, "
          "weak duality everywhere") {
  const ProblemInstance e = three_stage_example();
  const MultiplierVector zeros = MultiplierVector::zeros(e.constraints);
  // min over [0,6] of x^2 - 4x, x^2 + x, x^2 - 5x: -4 + 0 - 6.25.
  CHECK(dual_value(e, zeros) == doctest::Approx(-10.25));

  const OfflineSolution sol = solve_offline(e);
  CHECK(dual_value(e, sol.multipliers) ==
        doctest::Approx(sol.objective).epsilon(1e-6));

  for (double lam : {-6.0, -2.0, 0.0, 3.0}) {
    MultiplierVector m = zeros;
    m.lambda = {lam};
    CHECK(dual_value(e, m) <= sol.objective + 1e-9);
  }
}
