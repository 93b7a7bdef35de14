#include <doctest.h>

#include "oddo/errors.hpp"
#include "oddo/model.hpp"
#include "oddo/problems.hpp"

using namespace oddo;

TEST_CASE("objective of the three-stage example at its optimum and at the "
          "predicted-multiplier solution") {
  const ProblemInstance e = three_stage_example();
  CHECK(evaluate_objective(e, {{4.0}, {1.5}, {4.5}}) == doctest::Approx(1.5));
  // (1 - 4) + (9 + 3) + (36 - 30)
  CHECK(evaluate_objective(e, {{1.0}, {3.0}, {6.0}}) == doctest::Approx(15.0));
}

TEST_CASE("zero costs give a zero objective") {
  ProblemInstance inst;
  inst.constraints.T = 2;
  inst.constraints.stages = {StageSet::box1d(0.0, 1.0),
                             StageSet::box1d(0.0, 1.0)};
  inst.costs = {CostFunction::linear({0.0}), CostFunction::linear({0.0})};
  CHECK(evaluate_objective(inst, {{0.5}, {1.0}}) == doctest::Approx(0.0));
}

TEST_CASE("feasibility report on the three-stage example") {
  const ProblemInstance e = three_stage_example();

  const FeasibilityReport ok =
      check_feasibility(e.constraints, {{1.0}, {3.0}, {6.0}}, 1e-9);
  CHECK(ok.feasible);
  CHECK(ok.max_violation <= 1e-12);

  const FeasibilityReport eq =
      check_feasibility(e.constraints, {{0.0}, {0.0}, {0.0}}, 1e-9);
  CHECK(!eq.feasible);
  CHECK(eq.max_violation == doctest::Approx(10.0));
  CHECK(eq.worst == "equality 1");

  const FeasibilityReport box =
      check_feasibility(e.constraints, {{7.0}, {2.0}, {1.0}}, 1e-9);
  CHECK(!box.feasible);
  CHECK(box.max_violation == doctest::Approx(1.0));
  CHECK(box.worst == "stage 1 upper bound");
}

TEST_CASE("stage box membership and clipping") {
  const StageSet box = StageSet::box({0.0, -1.0}, {2.0, 1.0});
  CHECK(box.dimension() == 2);
  CHECK(box.contains({1.0, 0.0}, 0.0));
  CHECK(!box.contains({3.0, 0.0}, 0.0));
  CHECK(box.contains({2.05, 0.0}, 0.1));
  CHECK(box.clip({3.0, -2.0}) == std::vector<double>{2.0, -1.0});

  CHECK_THROWS_AS(StageSet::box({1.0}, {0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(StageSet::box({}, {}).validate(), ConfigError);
}

TEST_CASE("coupling rows: lhs, prefix sums, sparse coefficient lookup") {
  LinearCoupling row;
  row.coeffs = {{1.0}, {}, {2.0, -1.0}};
  row.rhs = 4.0;
  const std::vector<std::vector<double>> x = {{3.0}, {9.0}, {1.0, 2.0}};
  CHECK(row.lhs(x) == doctest::Approx(3.0));  // 3 + 0 + (2 - 2)
  CHECK(row.prefix_lhs(x, 2) == doctest::Approx(3.0));
  CHECK(row.prefix_lhs(x, 0) == doctest::Approx(0.0));
  CHECK(row.coeff(2, 0) == 2.0);
  CHECK(row.coeff(1, 0) == 0.0);  // empty stage block
  CHECK(row.coeff(5, 0) == 0.0);  // out of range
}

TEST_CASE("multiplier vectors: sizing and sign validation") {
  const ProblemInstance e = three_stage_example();
  const MultiplierVector zeros = MultiplierVector::zeros(e.constraints);
  CHECK(zeros.mu.size() == e.constraints.coupling.inequalities.size());
  CHECK(zeros.lambda.size() == 1);
  CHECK_NOTHROW(zeros.validate());

  MultiplierVector bad = zeros;
  bad.mu.assign(2, 0.0);
  bad.mu[1] = -0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(bad.validate(0.6));  // within tolerance
}

TEST_CASE("instance validation catches mismatched shapes") {
  ProblemInstance inst;
  inst.constraints.T = 2;
  inst.constraints.stages = {StageSet::box1d(0.0, 1.0),
                             StageSet::box1d(0.0, 1.0)};
  inst.costs = {CostFunction::quadratic({0.0})};
  CHECK_THROWS_AS(inst.validate(), ConfigError);  // cost count != T

  inst.costs.push_back(CostFunction::quadratic({0.0, 0.0}));
  CHECK_THROWS_AS(inst.validate(), ConfigError);  // stage-2 dimension mismatch

  inst.costs[1] = CostFunction::quadratic({0.0});
  CHECK_NOTHROW(inst.validate());

  LinearCoupling row;
  row.coeffs = {{1.0, 1.0}};
  inst.constraints.coupling.inequalities.push_back(row);
  CHECK_THROWS_AS(inst.validate(), ConfigError);  // row block vs stage box
}
