#include <doctest.h>

#include <limits>
#include <vector>

#include "oddo/errors.hpp"
#include "oddo/model.hpp"
#include "oddo/problems.hpp"
#include "oddo/projection.hpp"

using namespace oddo;

namespace {

// Tightest implied bounds on the single remaining variable of a 1-D system.
std::pair<double, double> implied_interval(const AffineSystem& system) {
  REQUIRE(system.n == 1);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const AffineRow& row : system.rows) {
    REQUIRE(row.rel == Relation::LE);
    if (row.a[0] > 0.0) hi = std::min(hi, row.rhs / row.a[0]);
    if (row.a[0] < 0.0) lo = std::max(lo, row.rhs / row.a[0]);
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("eliminating a variable keeps the projection") {
  AffineSystem system;
  system.n = 2;
  system.rows = {{{1.0, 1.0}, Relation::EQ, 10.0},
                 {{0.0, 1.0}, Relation::LE, 6.0},
                 {{0.0, -1.0}, Relation::LE, 0.0}};
  const AffineSystem reduced = fme_eliminate(system, 1);
  CHECK(reduced.n == 1);
  const auto [lo, hi] = implied_interval(reduced);
  CHECK(lo == doctest::Approx(4.0));
  CHECK(hi == doctest::Approx(10.0));
  CHECK(!reduced.infeasible_certificate());
}

TEST_CASE("eliminating an absent variable passes rows through") {
  AffineSystem system;
  system.n = 2;
  system.rows = {{{1.0, 0.0}, Relation::LE, 3.0},
                 {{-2.0, 0.0}, Relation::LE, 1.0}};
  const AffineSystem reduced = fme_eliminate(system, 1);
  REQUIRE(reduced.rows.size() == 2);
  // Rows may be rescaled; the described halfspaces must be unchanged.
  const auto [lo, hi] = implied_interval(reduced);
  CHECK(lo == doctest::Approx(-0.5));
  CHECK(hi == doctest::Approx(3.0));
}

TEST_CASE("an empty system leaves an infeasibility certificate") {
  AffineSystem system;
  system.n = 1;
  system.rows = {{{1.0}, Relation::LE, 1.0}, {{-1.0}, Relation::LE, -2.0}};
  const AffineSystem reduced = fme_eliminate(system, 0);
  CHECK(reduced.infeasible_certificate());
}

TEST_CASE("stage projection on the worked three-stage example") {
  const ProblemInstance e = three_stage_example();

  const StageInterval first = project_onto_stage(e.constraints, {}, 0);
  CHECK(first.lo == doctest::Approx(0.0));
  CHECK(first.hi == doctest::Approx(6.0));

  const StageInterval second = project_onto_stage(e.constraints, {{1.0}}, 1);
  CHECK(second.lo == doctest::Approx(3.0));
  CHECK(second.hi == doctest::Approx(6.0));

  const StageInterval third =
      project_onto_stage(e.constraints, {{1.0}, {3.0}}, 2);
  CHECK(third.lo == doctest::Approx(6.0));
  CHECK(third.hi == doctest::Approx(6.0));

  // A prefix that pushes the remaining stage below its box is rejected.
  CHECK_THROWS_AS(project_onto_stage(e.constraints, {{6.0}, {6.0}}, 2),
                  InfeasibleError);
}

TEST_CASE("battery band recursion tightens toward the terminal equality") {
  const std::vector<double> l{-2.0, -2.0, -2.0};
  const std::vector<double> u{2.0, 2.0, 2.0};
  const CapacityBounds bounds =
      battery_projection_bounds(1.0, l, u, {-5.0, -5.0}, {5.0, 5.0}, 0.0);
  CHECK(bounds.lo == std::vector<double>{-4.0, -2.0, 0.0});
  CHECK(bounds.hi == std::vector<double>{4.0, 2.0, 0.0});

  // Rates wide enough never to bind leave the original band untouched.
  const std::vector<double> wide(3, 1e9);
  const std::vector<double> wide_neg(3, -1e9);
  const CapacityBounds loose = battery_projection_bounds(
      1.0, wide_neg, wide, {-5.0, -5.0}, {5.0, 5.0}, 0.0);
  CHECK(loose.lo == std::vector<double>{-5.0, -5.0, 0.0});
  CHECK(loose.hi == std::vector<double>{5.0, 5.0, 0.0});

  // A terminal level the rates cannot reach crosses the band.
  CHECK_THROWS_AS(
      battery_projection_bounds(1.0, l, u, {-5.0, -5.0}, {5.0, 5.0}, 10.0),
      InfeasibleError);
}

TEST_CASE("per-stage battery interval") {
  const std::vector<double> l{-2.0, -2.0, -2.0};
  const std::vector<double> u{2.0, 2.0, 2.0};
  const CapacityBounds bounds =
      battery_projection_bounds(1.0, l, u, {-5.0, -5.0}, {5.0, 5.0}, 0.0);

  const StageInterval first = battery_stage_interval(bounds, 1.0, l, u, 0, 0.0);
  CHECK(first.lo == doctest::Approx(-2.0));
  CHECK(first.hi == doctest::Approx(2.0));

  // Prefix at the band's upper edge forces the maximal allowed discharge.
  const StageInterval pinned =
      battery_stage_interval(bounds, 1.0, l, u, 1, 4.0);
  CHECK(pinned.lo == doctest::Approx(-2.0));
  CHECK(pinned.hi == doctest::Approx(-2.0));

  // The last stage is pinned by the terminal equality.
  const StageInterval last = battery_stage_interval(bounds, 1.0, l, u, 2, 1.5);
  CHECK(last.lo == doctest::Approx(-1.5));
  CHECK(last.hi == doctest::Approx(-1.5));

  // A prefix the remaining rates cannot undo is rejected.
  CHECK_THROWS_AS(battery_stage_interval(bounds, 1.0, l, u, 2, 3.0),
                  InfeasibleError);
}

TEST_CASE("battery recursion agrees with generic elimination on a built "
          "instance") {
  BatteryParams params;
  params.T = 3;
  params.dt = 1.0;
  params.l = {-2.0, -2.0, -2.0};
  params.u = {2.0, 2.0, 2.0};
  params.C_lo = {-5.0, -5.0};
  params.C_hi = {5.0, 5.0};
  params.C_end = 0.0;
  params.p = {1.0, 1.0, 1.0};
  const ProblemInstance inst = build_battery_instance(params);

  const CapacityBounds bounds = battery_projection_bounds(
      params.dt, params.l, params.u, params.C_lo, params.C_hi, params.C_end);
  const StageInterval fast =
      battery_stage_interval(bounds, params.dt, params.l, params.u, 1, -1.0);
  const StageInterval generic =
      project_onto_stage(inst.constraints, {{-1.0}}, 1);
  CHECK(fast.lo == doctest::Approx(generic.lo).epsilon(1e-9));
  CHECK(fast.hi == doctest::Approx(generic.hi).epsilon(1e-9));
  CHECK(fast.lo == doctest::Approx(-1.0));
  CHECK(fast.hi == doctest::Approx(2.0));
}
