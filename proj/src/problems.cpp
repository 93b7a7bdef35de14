#include "oddo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "oddo/errors.hpp"
#include "oddo/laminar.hpp"
#include "oddo/rng.hpp"

namespace oddo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Stream tags for the independent randomness sources.
enum StreamTag : std::uint64_t {
  kBaseLoad = 1,
  kMorningAmp = 2,
  kEveningAmp = 3,
  kWeather = 4,
  kNoise = 5,
  kImCost = 10,
  kIsub = 20,
};

}  // namespace

void BatteryParams::validate() const {
  if (T < 1 || dt <= 0.0) throw ConfigError("battery: T and dt must be positive");
  if (static_cast<int>(l.size()) != T || static_cast<int>(u.size()) != T ||
      static_cast<int>(p.size()) != T ||
      static_cast<int>(C_lo.size()) != T - 1 ||
      static_cast<int>(C_hi.size()) != T - 1) {
    throw ConfigError("battery: parameter array sizes do not match T");
  }
  for (int t = 0; t < T; ++t) {
    if (l[static_cast<std::size_t>(t)] > 0.0 ||
        u[static_cast<std::size_t>(t)] < 0.0) {
      throw ConfigError("battery: rate bounds must bracket zero");
    }
  }
  for (int t = 0; t + 1 < T; ++t) {
    if (C_lo[static_cast<std::size_t>(t)] > 0.0 ||
        C_hi[static_cast<std::size_t>(t)] < 0.0) {
      throw ConfigError("battery: SoC bands must bracket zero");
    }
  }
}

BatteryParams battery_defaults() {
  BatteryParams bp;
  bp.T = 96;
  bp.dt = 0.25;
  bp.l.assign(96, -8670.0);
  bp.u.assign(96, 8670.0);
  bp.C_lo.assign(95, -5890.0);
  bp.C_hi.assign(95, 5890.0);
  bp.C_end = 0.0;
  return bp;
}

std::vector<double> synthetic_consumption(std::uint64_t seed, int day_index,
                                          int households,
                                          bool shift_into_increasing,
                                          double floor) {
  if (day_index < 0) throw ConfigError("day index must be nonnegative");
  if (households < 0) throw ConfigError("household count must be nonnegative");
  const int T = 96;

  // Shared day-to-day weather factor: AR(1) walked forward from day 0 so the
  // same (seed, day) pair always lands on the same value.
  double weather = 0.0;
  for (int d = 0; d <= day_index; ++d) {
    HashRng rng(stream_key(seed, kWeather, static_cast<std::uint64_t>(d)));
    const double shock = 0.15 * rng.normal();
    weather = (d == 0) ? shock : 0.7 * weather + shock;
  }

  std::vector<double> p(static_cast<std::size_t>(T), 0.0);
  for (int h = 0; h < households; ++h) {
    HashRng traits(stream_key(seed, kBaseLoad, static_cast<std::uint64_t>(h)));
    const double base = traits.uniform(150.0, 350.0);
    HashRng morning(stream_key(seed, kMorningAmp, static_cast<std::uint64_t>(h)));
    const double amp_m = morning.uniform(100.0, 400.0);
    HashRng evening(stream_key(seed, kEveningAmp, static_cast<std::uint64_t>(h)));
    const double amp_e = evening.uniform(200.0, 600.0);
    for (int t = 0; t < T; ++t) {
      const double tau = (static_cast<double>(t) + 0.5) * 0.25;  // hours
      const double diurnal =
          base +
          amp_m * std::exp(-0.5 * std::pow((tau - 7.5) / 1.2, 2.0)) +
          amp_e * std::exp(-0.5 * std::pow((tau - 18.5) / 1.5, 2.0));
      HashRng noise(stream_key(seed, kNoise, static_cast<std::uint64_t>(h),
                               static_cast<std::uint64_t>(day_index),
                               static_cast<std::uint64_t>(t)));
      const double load =
          std::max(20.0, diurnal * (1.0 + weather) + 20.0 * noise.normal());
      p[static_cast<std::size_t>(t)] += load;
    }
  }

  if (shift_into_increasing && households > 0) {
    const double low = *std::min_element(p.begin(), p.end());
    if (low < floor) {
      const double shift = floor - low;
      for (double& v : p) v += shift;
    }
  }
  return p;
}

ProblemInstance build_battery_instance(const BatteryParams& params) {
  params.validate();
  const int T = params.T;
  ProblemInstance inst;
  InstanceConstraints& con = inst.constraints;
  con.T = T;
  con.stages.reserve(static_cast<std::size_t>(T));
  inst.costs.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    con.stages.push_back(StageSet::box1d(params.l[static_cast<std::size_t>(t)],
                                         params.u[static_cast<std::size_t>(t)]));
    inst.costs.push_back(
        CostFunction::quadratic({params.p[static_cast<std::size_t>(t)]}));
  }

  // Cumulative rows carry unit coefficients; dividing the rhs by dt keeps
  // the dual pressure on stage t equal to sum_{s>=t}(mu+_s - mu-_s) + lambda.
  auto prefix_row = [&](int t, double sign, double rhs) {
    LinearCoupling row;
    row.coeffs.assign(static_cast<std::size_t>(T), {});
    for (int s = 0; s <= t; ++s) {
      row.coeffs[static_cast<std::size_t>(s)] = {sign};
    }
    row.rhs = rhs;
    return row;
  };
  InstanceStructure& st = con.structure;
  st.kind = StructureKind::BatteryChain;
  st.dt = params.dt;
  for (int t = 0; t + 1 < T; ++t) {
    con.coupling.inequalities.push_back(
        prefix_row(t, 1.0, params.C_hi[static_cast<std::size_t>(t)] / params.dt));
  }
  for (int t = 0; t + 1 < T; ++t) {
    con.coupling.inequalities.push_back(prefix_row(
        t, -1.0, -params.C_lo[static_cast<std::size_t>(t)] / params.dt));
  }
  con.coupling.equalities.push_back(
      prefix_row(T - 1, 1.0, params.C_end / params.dt));

  st.ground_rhs = params.C_end / params.dt;
  st.ground_row = 0;
  st.sets.reserve(static_cast<std::size_t>(T) - 1);
  for (int t = 0; t + 1 < T; ++t) {
    SetCapacity sc;
    sc.members.resize(static_cast<std::size_t>(t) + 1);
    for (int s = 0; s <= t; ++s) sc.members[static_cast<std::size_t>(s)] = s;
    sc.hi = params.C_hi[static_cast<std::size_t>(t)] / params.dt;
    sc.lo = params.C_lo[static_cast<std::size_t>(t)] / params.dt;
    sc.row_hi = t;
    sc.row_lo = (T - 1) + t;
    st.sets.push_back(std::move(sc));
  }
  // Increasing objective over the box needs gradient 2(p + x) >= 0 at x = l.
  st.increasing_costs = true;
  for (int t = 0; t < T; ++t) {
    if (params.p[static_cast<std::size_t>(t)] +
            params.l[static_cast<std::size_t>(t)] < 0.0) {
      st.increasing_costs = false;
      break;
    }
  }

  inst.metadata["problem"] = "battery";
  inst.validate();
  return inst;
}

ProblemInstance generate_battery_instance(std::uint64_t seed, int day_index) {
  BatteryParams bp = battery_defaults();
  bp.p = synthetic_consumption(seed, day_index);
  ProblemInstance inst = build_battery_instance(bp);
  inst.metadata["seed"] = std::to_string(seed);
  inst.metadata["day"] = std::to_string(day_index);
  return inst;
}

double im_demand(int t) {
  return 1000.0 * (1.0 + 0.5 * std::sin(kPi * static_cast<double>(t - 1) / 12.0));
}

double im_nominal_cost(int t, int i) {
  static const double Ebar[3] = {1.0, 1.5, 2.0};
  if (i < 1 || i > 3) throw ConfigError("factory index must be in 1..3");
  return Ebar[i - 1] *
         (1.0 - 0.5 * std::sin(kPi * static_cast<double>(t - 1) / 12.0));
}

std::vector<CostFunction> im_costs_from_parameters(
    const std::vector<double>& c_flat, int T, int N) {
  if (static_cast<int>(c_flat.size()) != T * N) {
    throw ConfigError("flattened cost matrix has the wrong size");
  }
  std::vector<CostFunction> costs;
  costs.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    std::vector<double> c(c_flat.begin() + static_cast<long>(t) * N,
                          c_flat.begin() + static_cast<long>(t + 1) * N);
    costs.push_back(CostFunction::linear(std::move(c)));
  }
  return costs;
}

ProblemInstance generate_im_instance(std::uint64_t seed,
                                     const ImParams& params) {
  const int T = params.T;
  const int N = params.N;
  ProblemInstance inst;
  InstanceConstraints& con = inst.constraints;
  con.T = T;
  std::vector<double> zeros(static_cast<std::size_t>(N), 0.0);
  std::vector<double> caps(static_cast<std::size_t>(N), params.stage_cap);
  for (int t = 0; t < T; ++t) {
    con.stages.push_back(StageSet::box(zeros, caps));
    std::vector<double> c(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      HashRng rng(stream_key(seed, kImCost, static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(i)));
      c[static_cast<std::size_t>(i)] =
          im_nominal_cost(t + 1, i + 1) * rng.uniform(0.8, 1.2);
    }
    inst.costs.push_back(CostFunction::linear(std::move(c)));
  }

  // Horizon capacity per factory.
  for (int i = 0; i < N; ++i) {
    LinearCoupling row;
    row.coeffs.assign(static_cast<std::size_t>(T), {});
    std::vector<double> e(static_cast<std::size_t>(N), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    for (int t = 0; t < T; ++t) row.coeffs[static_cast<std::size_t>(t)] = e;
    row.rhs = params.horizon_cap;
    con.coupling.inequalities.push_back(std::move(row));
  }
  // Warehouse stock after period t:  S + cumulative production - cumulative
  // demand in [L, U]; lower rows first, then upper rows.
  std::vector<double> ones(static_cast<std::size_t>(N), 1.0);
  std::vector<double> neg(static_cast<std::size_t>(N), -1.0);
  double cum_demand = 0.0;
  std::vector<double> D(static_cast<std::size_t>(T), 0.0);
  for (int t = 0; t < T; ++t) {
    cum_demand += im_demand(t + 1);
    D[static_cast<std::size_t>(t)] = cum_demand;
  }
  for (int t = 0; t < T; ++t) {
    LinearCoupling row;
    row.coeffs.assign(static_cast<std::size_t>(T), {});
    for (int s = 0; s <= t; ++s) row.coeffs[static_cast<std::size_t>(s)] = neg;
    row.rhs = params.S - params.L - D[static_cast<std::size_t>(t)];
    con.coupling.inequalities.push_back(std::move(row));
  }
  for (int t = 0; t < T; ++t) {
    LinearCoupling row;
    row.coeffs.assign(static_cast<std::size_t>(T), {});
    for (int s = 0; s <= t; ++s) row.coeffs[static_cast<std::size_t>(s)] = ones;
    row.rhs = params.U - params.S + D[static_cast<std::size_t>(t)];
    con.coupling.inequalities.push_back(std::move(row));
  }

  inst.metadata["problem"] = "im";
  inst.metadata["seed"] = std::to_string(seed);
  inst.validate();
  return inst;
}

std::vector<CostFunction> random_isub_costs(std::uint64_t seed,
                                            const std::vector<double>& box_lower,
                                            CostFamily family) {
  HashRng rng(stream_key(seed, kIsub, 7));
  const int T = static_cast<int>(box_lower.size());
  std::vector<CostFunction> costs;
  costs.reserve(box_lower.size());

  // One curvature pair for the whole instance so the power-family regret
  // bound (common K, c; per-stage a) applies verbatim.
  BaseFunction power_base;
  power_base.kind = BaseKind::Power;
  power_base.K = rng.uniform(0.5, 2.0);
  const double exps[3] = {1.5, 2.0, 3.0};
  power_base.c = exps[rng.uniform_int(0, 2)];

  for (int t = 0; t < T; ++t) {
    const double lo_box = box_lower[static_cast<std::size_t>(t)];
    switch (family) {
      case CostFamily::Quadratic: {
        // gradient 2(p + x) >= 0 on the box needs p >= -lo.
        const double p = std::max(0.0, -lo_box) + rng.uniform(0.0, 1.0);
        costs.push_back(CostFunction::quadratic({p}));
        break;
      }
      case CostFamily::Power: {
        const double a = rng.uniform(0.5, 2.0);
        const double b = std::max(0.0, -lo_box / a) + rng.uniform(0.0, 0.5);
        costs.push_back(CostFunction::scaled_shifted(power_base, a, b));
        break;
      }
      case CostFamily::Exponential: {
        BaseFunction base;
        base.kind = BaseKind::Exponential;
        base.K = rng.uniform(0.5, 1.5);
        const double a = rng.uniform(0.5, 2.0);
        const double b = rng.uniform(0.0, 0.5);
        costs.push_back(CostFunction::scaled_shifted(base, a, b));
        break;
      }
    }
  }
  return costs;
}

ProblemInstance generate_random_isub_instance(std::uint64_t seed, int T,
                                              CostFamily family) {
  if (T < 1) throw ConfigError("stage count must be positive");
  HashRng rng(stream_key(seed, kIsub, static_cast<std::uint64_t>(T)));

  LaminarFamily fam;
  fam.T = T;
  fam.stage_upper.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    fam.stage_upper[static_cast<std::size_t>(t)] = rng.uniform(0.5, 2.0);
  }

  // Random laminar interval sets: recursively split [lo, hi) and list some
  // of the resulting blocks with capacities below their children's total.
  std::vector<std::pair<int, int>> blocks;
  auto split = [&](auto&& self, int lo, int hi) -> void {
    if (hi - lo < 2) return;
    if (hi - lo < T && rng.uniform() < 0.55) {
      blocks.emplace_back(lo, hi);
    }
    if (rng.uniform() < 0.7) {
      const int mid = rng.uniform_int(lo + 1, hi - 1);
      self(self, lo, mid);
      self(self, mid, hi);
    }
  };
  split(split, 0, T);
  for (const auto& [lo, hi] : blocks) {
    LaminarSet set;
    for (int t = lo; t < hi; ++t) set.members.push_back(t);
    double span = 0.0;
    for (int t = lo; t < hi; ++t) {
      span += fam.stage_upper[static_cast<std::size_t>(t)];
    }
    set.capacity = rng.uniform(0.55, 0.95) * span;
    fam.sets.push_back(std::move(set));
  }

  std::vector<int> all(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) all[static_cast<std::size_t>(t)] = t;
  fam.ground = kNoBound;  // lifted while measuring the reachable total
  const double top = induced_value(fam, all);
  fam.ground = rng.uniform(0.50, 0.95) * top;

  InstanceConstraints shape = embed_laminar_constraints(fam);
  std::vector<double> box_lower;
  box_lower.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    box_lower.push_back(shape.stages[static_cast<std::size_t>(t)].lower[0]);
  }
  std::vector<CostFunction> costs =
      random_isub_costs(rng.next_u64(), box_lower, family);

  ProblemInstance inst = embed_laminar(fam, std::move(costs));
  inst.metadata["problem"] = "random-isub";
  inst.metadata["seed"] = std::to_string(seed);
  return inst;
}

ProblemInstance three_stage_example() {
  ProblemInstance inst;
  InstanceConstraints& con = inst.constraints;
  con.T = 3;
  const double Y[3] = {-4.0, 1.0, -5.0};
  for (int t = 0; t < 3; ++t) {
    con.stages.push_back(StageSet::box1d(0.0, 6.0));
    // (x + Y/2)^2 - Y^2/4 reproduces x^2 + Y x exactly.
    inst.costs.push_back(
        CostFunction::quadratic({Y[t] / 2.0}, -Y[t] * Y[t] / 4.0));
  }
  LinearCoupling eq;
  eq.coeffs = {{1.0}, {1.0}, {1.0}};
  eq.rhs = 10.0;
  con.coupling.equalities.push_back(std::move(eq));
  con.structure.kind = StructureKind::Rap;
  con.structure.ground_rhs = 10.0;
  con.structure.ground_row = 0;
  con.structure.increasing_costs = false;  // gradients negative near zero
  inst.metadata["problem"] = "example-e";
  inst.validate();
  return inst;
}

}  // namespace oddo
