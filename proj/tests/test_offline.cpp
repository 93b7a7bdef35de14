#include <doctest.h>

#include <cmath>
#include <vector>

#include "oddo/errors.hpp"
#include "oddo/laminar.hpp"
#include "oddo/model.hpp"
#include "oddo/nested.hpp"
#include "oddo/offline.hpp"
#include "oddo/problems.hpp"
#include "oddo/rap.hpp"
#include "oddo/rng.hpp"

using namespace oddo;

namespace {

ProblemInstance battery_toy_instance(std::uint64_t seed) {
  BatteryParams params;
  params.T = 3;
  params.dt = 1.0;
  params.l = {-2.0, -2.0, -2.0};
  params.u = {2.0, 2.0, 2.0};
  params.C_lo = {-5.0, -5.0};
  params.C_hi = {5.0, 5.0};
  params.C_end = 0.0;
  HashRng rng(seed);
  params.p = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
              rng.uniform(-2.0, 2.0)};
  return build_battery_instance(params);
}

double max_box_gradient(const ProblemInstance& inst) {
  double g = 0.0;
  for (int t = 0; t < inst.constraints.T; ++t) {
    const StageSet& box = inst.constraints.stages[t];
    for (int i = 0; i < box.dimension(); ++i) {
      for (double corner : {box.lower[i], box.upper[i]}) {
        std::vector<double> x(box.dimension(), 0.0);
        x[i] = corner;
        g = std::max(g, std::abs(inst.costs[t].gradient(x)[i]));
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("equality-only allocation: worked example, symmetry, saturation") {
  const ProblemInstance e = three_stage_example();
  std::vector<double> lower, upper;
  for (const auto& s : e.constraints.stages) {
    lower.push_back(s.lower[0]);
    upper.push_back(s.upper[0]);
  }
  const RapSolution sol = solve_rap(e.costs, lower, upper, 10.0);
  REQUIRE(sol.x.size() == 3);
  CHECK(sol.x[0] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(sol.x[2] == doctest::Approx(4.5).epsilon(1e-9));
  CHECK(sol.lambda == doctest::Approx(-4.0).epsilon(1e-9));

  const std::vector<CostFunction> same(3, CostFunction::quadratic({1.0}));
  const RapSolution sym = solve_rap(same, {0.0, 0.0, 0.0}, {4.0, 4.0, 4.0}, 6.0);
  for (double v : sym.x) CHECK(v == doctest::Approx(2.0));
  CHECK(sym.lambda == doctest::Approx(-6.0));  // -gradient at 2

  const RapSolution full = solve_rap(same, {0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}, 6.0);
  for (double v : full.x) CHECK(v == doctest::Approx(2.0));

  CHECK_THROWS_AS(solve_rap(same, {0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}, 7.0),
                  InfeasibleError);
}

TEST_CASE("nested decomposition degenerates to the plain equality solver") {
  const ProblemInstance e = three_stage_example();
  const OfflineSolution sol = solve_nested_rap(e);
  CHECK(sol.x[0][0] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(sol.x[1][0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(sol.x[2][0] == doctest::Approx(4.5).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(1.5).epsilon(1e-9));
  REQUIRE(sol.multipliers.lambda.size() == 1);
  CHECK(sol.multipliers.lambda[0] == doctest::Approx(-4.0).epsilon(1e-9));
  CHECK(sol.kkt.max_residual <= 1e-8);
}

TEST_CASE("slack set capacities carry zero multipliers") {
  LaminarFamily family;
  family.T = 3;
  family.stage_upper = {2.0, 2.0, 2.0};
  family.sets = {{{0, 1}, 100.0}};
  family.ground = 3.0;
  const ProblemInstance inst =
      embed_laminar(family, {CostFunction::quadratic({0.0}),
                             CostFunction::quadratic({0.0}),
                             CostFunction::quadratic({0.0})});
  const OfflineSolution sol = solve_nested_rap(inst);
  for (int t = 0; t < 3; ++t) CHECK(sol.x[t][0] == doctest::Approx(1.0));
  for (double mu : sol.multipliers.mu) CHECK(mu == doctest::Approx(0.0));
}

TEST_CASE("chain instance agrees with the grid oracle") {
  const ProblemInstance inst = battery_toy_instance(7);
  const OfflineSolution sol = solve_nested_rap(inst);
  CHECK(sol.kkt.max_residual <= 1e-6);

  const double res = 2e-3;
  const OracleResult oracle = brute_force_oracle(inst, res);
  CHECK(std::abs(sol.objective - oracle.objective) <=
        2.0 * res * max_box_gradient(inst));
}

TEST_CASE("simplex recovers binding-row duals") {
  ProblemInstance lp;
  lp.constraints.T = 1;
  StageSet stage;
  stage.lower = {0.0};
  stage.upper = {5.0};
  lp.constraints.stages = {stage};
  AffineConstraint ge1;  // x >= 1 stored as -x <= -1
  ge1.coefficients = {{0, {-1.0}}};
  ge1.rhs = -1.0;
  AffineConstraint le2;
  le2.coefficients = {{0, {1.0}}};
  le2.rhs = 2.0;
  lp.constraints.coupling.inequalities = {ge1, le2};
  lp.costs = {CostFunction::linear({1.0})};

  const OfflineSolution sol = solve_lp_with_duals(lp);
  CHECK(sol.x[0][0] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(1.0));
  REQUIRE(sol.multipliers.mu.size() == 2);
  CHECK(sol.multipliers.mu[0] == doctest::Approx(1.0));
  CHECK(sol.multipliers.mu[1] == doctest::Approx(0.0));
  CHECK(sol.kkt.max_residual <= 1e-6);
}

TEST_CASE("degenerate linear programs terminate with certified duals") {
  ProblemInstance lp;
  lp.constraints.T = 2;
  StageSet stage;
  stage.lower = {0.0};
  stage.upper = {2.0};
  lp.constraints.stages = {stage, stage};
  AffineConstraint balance;
  balance.coefficients = {{0, {1.0}}, {1, {1.0}}};
  balance.rhs = 2.0;
  lp.constraints.coupling.equalities = {balance, balance};  // duplicated row
  lp.costs = {CostFunction::linear({1.0}), CostFunction::linear({3.0})};

  const OfflineSolution sol = solve_lp_with_duals(lp);
  CHECK(sol.objective == doctest::Approx(2.0));
  CHECK(sol.x[0][0] == doctest::Approx(2.0));
  CHECK(sol.x[1][0] == doctest::Approx(0.0));
  CHECK(sol.kkt.max_residual <= 1e-6);
}

TEST_CASE("small linear instance agrees with the grid oracle") {
  ProblemInstance lp;
  lp.constraints.T = 2;
  StageSet stage;
  stage.lower = {0.0, 0.0};
  stage.upper = {3.0, 3.0};
  lp.constraints.stages = {stage, stage};
  AffineConstraint cap;  // first coordinates jointly capped
  cap.coefficients = {{0, {1.0, 0.0}}, {1, {1.0, 0.0}}};
  cap.rhs = 4.0;
  AffineConstraint total;  // everything sums to 7
  total.coefficients = {{0, {1.0, 1.0}}, {1, {1.0, 1.0}}};
  total.rhs = 7.0;
  lp.constraints.coupling.inequalities = {cap};
  lp.constraints.coupling.equalities = {total};
  lp.costs = {CostFunction::linear({1.0, 2.0}), CostFunction::linear({4.0, 0.5})};

  const OfflineSolution sol = solve_lp_with_duals(lp);
  CHECK(sol.kkt.max_residual <= 1e-6);
  const double res = 0.05;
  const OracleResult oracle = brute_force_oracle(lp, res);
  CHECK(std::abs(sol.objective - oracle.objective) <= 2.0 * res * 4.0);
}

TEST_CASE("grid oracle brackets the optimum and rejects bad input") {
  const ProblemInstance e = three_stage_example();
  const OracleResult oracle = brute_force_oracle(e, 0.01);
  CHECK(std::abs(oracle.objective - 1.5) <= 0.01);
  CHECK(oracle.objective >= 1.5 - 1e-9);  // grid points are feasible

  ProblemInstance empty;
  empty.constraints.T = 1;
  StageSet stage;
  stage.lower = {0.0};
  stage.upper = {1.0};
  empty.constraints.stages = {stage};
  AffineConstraint impossible;
  impossible.coefficients = {{0, {1.0}}};
  impossible.rhs = -1.0;
  empty.constraints.coupling.inequalities = {impossible};
  empty.costs = {CostFunction::quadratic({0.0})};
  CHECK_THROWS_AS(brute_force_oracle(empty, 0.1), InfeasibleError);

  ProblemInstance wide;
  wide.constraints.T = 1;
  StageSet big;
  big.lower = std::vector<double>(6, 0.0);
  big.upper = std::vector<double>(6, 1.0);
  wide.constraints.stages = {big};
  wide.costs = {CostFunction::linear(std::vector<double>(6, 1.0))};
  CHECK_THROWS_AS(brute_force_oracle(wide, 0.5), ConfigError);
}

TEST_CASE("KKT residual report") {
  const ProblemInstance e = three_stage_example();
  const OfflineSolution sol = solve_nested_rap(e);
  const KktReport good = kkt_residuals(e, sol.x, sol.multipliers);
  CHECK(good.max_residual <= 1e-8);

  // The optimum with zero multipliers is not stationary.
  const KktReport zeroed =
      kkt_residuals(e, sol.x, MultiplierVector::zeros(e.constraints));
  CHECK(zeroed.stationarity > 1e-3);

  // A positive multiplier on a slack row is charged the scaled product.
  ProblemInstance slack;
  slack.constraints.T = 1;
  StageSet stage;
  stage.lower = {0.0};
  stage.upper = {2.0};
  slack.constraints.stages = {stage};
  AffineConstraint row;
  row.coefficients = {{0, {1.0}}};
  row.rhs = 1.5;
  slack.constraints.coupling.inequalities = {row};
  slack.costs = {CostFunction::quadratic({0.0})};
  MultiplierVector m = MultiplierVector::zeros(slack.constraints);
  m.mu[0] = 0.4;
  const KktReport rep = kkt_residuals(slack, {{1.0}}, m);
  CHECK(rep.complementarity == doctest::Approx(0.4 * 0.5 / 1.5));
}

TEST_CASE("offline dispatch certifies strong duality") {
  const ProblemInstance battery = battery_toy_instance(11);
  const OfflineSolution sol = solve_offline(battery);
  CHECK(sol.kkt.max_residual <= 1e-6);
  const ProblemInstance im = generate_im_instance(3);
  const OfflineSolution lp = solve_offline(im);
  CHECK(lp.kkt.max_residual <= 1e-6);
}
