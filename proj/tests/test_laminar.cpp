#include <doctest.h>

#include <cstdint>

#include "oddo/errors.hpp"
#include "oddo/laminar.hpp"

using namespace oddo;

namespace {

// T=3 chain toy: prefix caps from the backward band recursion, boxes +-2.
LaminarFamily chain_toy() {
  LaminarFamily family;
  family.T = 3;
  family.stage_upper = {2.0, 2.0, 2.0};
  family.sets = {{{0}, 4.0}, {{1}, 2.0}, {{2}, 2.0}, {{0, 1}, 2.0}};
  family.ground = 0.0;
  return family;
}

}  // namespace

TEST_CASE("embedding materializes one row per listed set plus the ground "
          "equality") {
  const LaminarFamily family = chain_toy();
  const ProblemInstance inst =
      embed_laminar(family, {CostFunction::quadratic({0.0}),
                             CostFunction::quadratic({0.0}),
                             CostFunction::quadratic({0.0})});
  CHECK(inst.constraints.coupling.inequalities.size() == 4);
  CHECK(inst.constraints.coupling.equalities.size() == 1);
  CHECK(inst.constraints.structure.kind == StructureKind::Laminar);
  CHECK(inst.constraints.structure.sets.size() == 4);
  CHECK(inst.constraints.structure.ground_rhs == 0.0);
}

TEST_CASE("a family with no proper sets degenerates to the pure resource "
          "allocation shape") {
  LaminarFamily family;
  family.T = 3;
  family.stage_upper = {6.0, 6.0, 6.0};
  family.ground = 10.0;
  const InstanceConstraints c = embed_laminar_constraints(family);
  CHECK(c.coupling.inequalities.empty());
  CHECK(c.coupling.equalities.size() == 1);
  CHECK(c.structure.kind == StructureKind::Rap);
}

TEST_CASE("embedding requires costs") {
  CHECK_THROWS_AS(embed_laminar(chain_toy(), {}), ConfigError);
}

TEST_CASE("stage boxes are the induced-value increments") {
  // One proper set {0,1} capped at 3 under ground 5: every stage keeps upper
  // 2, and the lower bounds are ground minus what the complement can carry.
  LaminarFamily family;
  family.T = 3;
  family.stage_upper = {2.0, 2.0, 2.0};
  family.sets = {{{0, 1}, 3.0}};
  family.ground = 5.0;
  const InstanceConstraints c = embed_laminar_constraints(family);
  CHECK(c.stages[0].lower[0] == doctest::Approx(1.0));
  CHECK(c.stages[1].lower[0] == doctest::Approx(1.0));
  CHECK(c.stages[2].lower[0] == doctest::Approx(2.0));
  for (const auto& stage : c.stages) CHECK(stage.upper[0] == 2.0);

  // The greedy base-polyhedron vertex is feasible for the embedded rows.
  const auto vertex = greedy_vertex(family);
  CHECK(vertex[0][0] == doctest::Approx(2.0));
  CHECK(vertex[1][0] == doctest::Approx(1.0));
  CHECK(vertex[2][0] == doctest::Approx(2.0));
  CHECK(check_feasibility(c, vertex, 1e-9).feasible);
}

TEST_CASE("effective capacities tighten parents by their children") {
  LaminarFamily family;
  family.T = 3;
  family.stage_upper = {1.0, 1.0, 1.0};
  family.sets = {{{0, 1}, 5.0}};
  family.ground = 2.0;
  CHECK(induced_value(family, {0, 1}) == doctest::Approx(2.0));
  CHECK(induced_value(family, {0}) == doctest::Approx(1.0));
  CHECK(induced_value(family, {0, 1, 2}) == doctest::Approx(2.0));  // ground
  CHECK_THROWS_AS(induced_value(family, {1, 0}), ConfigError);  // unsorted
}

TEST_CASE("ground value above reachable capacity is infeasible") {
  LaminarFamily family;
  family.T = 2;
  family.stage_upper = {1.0, 1.0};
  family.ground = 3.0;
  CHECK_THROWS_AS(embed_laminar_constraints(family), InfeasibleError);
}

TEST_CASE("laminarity detection and family validation") {
  CHECK(is_laminar({{{0, 1}, 1.0}, {{0, 1, 2}, 1.0}, {{3}, 1.0}}, 4));
  CHECK(!is_laminar({{{0, 1}, 1.0}, {{1, 2}, 1.0}}, 3));

  LaminarFamily crossing;
  crossing.T = 3;
  crossing.stage_upper = {1.0, 1.0, 1.0};
  crossing.sets = {{{0, 1}, 1.0}, {{1, 2}, 1.0}};
  CHECK_THROWS_AS(crossing.validate(), ConfigError);

  LaminarFamily duplicate;
  duplicate.T = 3;
  duplicate.stage_upper = {1.0, 1.0, 1.0};
  duplicate.sets = {{{0, 1}, 1.0}, {{0, 1}, 2.0}};
  CHECK_THROWS_AS(duplicate.validate(), ConfigError);

  LaminarFamily improper;
  improper.T = 2;
  improper.stage_upper = {1.0, 1.0};
  improper.sets = {{{0, 1}, 1.0}};  // not a proper subset
  CHECK_THROWS_AS(improper.validate(), ConfigError);
}

TEST_CASE("submodularity oracle check") {
  // Rank function of the uniform matroid of rank 2.
  CHECK(submodularity_check(4, [](std::uint64_t mask) {
    int n = 0;
    for (; mask; mask &= mask - 1) ++n;
    return static_cast<double>(n < 2 ? n : 2);
  }));
  // |X|^2 is strictly supermodular on disjoint nonempty sets.
  CHECK(!submodularity_check(3, [](std::uint64_t mask) {
    int n = 0;
    for (; mask; mask &= mask - 1) ++n;
    return static_cast<double>(n * n);
  }));
  // Modular functions pass with equality.
  CHECK(submodularity_check(5, [](std::uint64_t mask) {
    double s = 0.0;
    for (int t = 0; t < 5; ++t)
      if (mask & (std::uint64_t{1} << t)) s += 0.5 * (t + 1);
    return s;
  }));
  // The induced set function of a laminar family is submodular.
  LaminarFamily family;
  family.T = 4;
  family.stage_upper = {2.0, 1.0, 3.0, 1.5};
  family.sets = {{{0, 1}, 2.5}, {{2, 3}, 3.5}};
  family.ground = 6.0;
  CHECK(submodularity_check(4, [&](std::uint64_t mask) {
    std::vector<int> X;
    for (int t = 0; t < 4; ++t)
      if (mask & (std::uint64_t{1} << t)) X.push_back(t);
    return induced_value(family, X);
  }));
  CHECK_THROWS_AS(submodularity_check(13, [](std::uint64_t) { return 0.0; }),
                  ConfigError);
}
