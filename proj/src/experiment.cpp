#include "oddo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "oddo/errors.hpp"
#include "oddo/lagrangian.hpp"
#include "oddo/laminar.hpp"
#include "oddo/offline.hpp"
#include "oddo/online.hpp"
#include "oddo/predictors.hpp"
#include "oddo/problems.hpp"
#include "oddo/projection.hpp"
#include "oddo/rng.hpp"

namespace oddo {

namespace {

// Stream tags for the experiment's independent RNG lanes.
enum ExperimentTag : std::uint64_t {
  kTagTrain = 7001,
  kTagTest = 7002,
  kTagShape = 7003,
  kTagSuite = 7100,
};

const std::vector<std::string>& canonical_arms() {
  static const std::vector<std::string> arms = {"min",     "max",   "mean",
                                                "median",  "nominal", "exact"};
  return arms;
}

int arm_rank(const std::string& name) {
  if (name == "baseline") return 0;
  const auto& arms = canonical_arms();
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i] == name) return static_cast<int>(i) + 1;
  }
  return 99;
}

// Everything run_experiment needs to know about one problem family: how to
// materialize the k-th training/test instance, and how to read/rebuild the
// uncertain cost parameters for the nominal strategy.
struct ProblemDriver {
  InstanceConstraints constraints;
  std::function<ProblemInstance(int)> training;
  std::function<ProblemInstance(int)> testing;
  std::function<std::vector<double>(const ProblemInstance&)> parameters;
  CostBuilder build_costs;
};

std::vector<double> quadratic_shift_parameters(const ProblemInstance& inst) {
  std::vector<double> p;
  p.reserve(inst.costs.size());
  for (const auto& cost : inst.costs) {
    if (cost.kind != CostKind::Quadratic || cost.p.size() != 1) {
      throw ConfigError("expected scalar quadratic stage costs");
    }
    p.push_back(cost.p[0]);
  }
  return p;
}

ProblemDriver make_driver(const ExperimentConfig& config) {
  ProblemDriver driver;
  const std::uint64_t seed = config.seed;

  if (config.problem == "battery") {
    // The constraint polytope does not depend on the consumption vector, so
    // a zero profile serves for extracting the shared constraints.
    BatteryParams shape = battery_defaults();
    shape.p.assign(static_cast<std::size_t>(shape.T), 0.0);
    driver.constraints = build_battery_instance(shape).constraints;
    // Consecutive synthetic days: training days first, then unseen ones.
    driver.training = [seed](int k) {
      return generate_battery_instance(seed, k);
    };
    const int offset = config.training_size;
    driver.testing = [seed, offset](int k) {
      return generate_battery_instance(seed, offset + k);
    };
    driver.parameters = quadratic_shift_parameters;
    driver.build_costs = [](const std::vector<double>& p) {
      std::vector<CostFunction> costs;
      costs.reserve(p.size());
      for (double pt : p) costs.push_back(CostFunction::quadratic({pt}));
      return costs;
    };
    return driver;
  }

  if (config.problem == "im") {
    driver.constraints = generate_im_instance(seed).constraints;
    driver.training = [seed](int k) {
      return generate_im_instance(
          stream_key(seed, kTagTrain, static_cast<std::uint64_t>(k)));
    };
    driver.testing = [seed](int k) {
      return generate_im_instance(
          stream_key(seed, kTagTest, static_cast<std::uint64_t>(k)));
    };
    driver.parameters = [](const ProblemInstance& inst) {
      std::vector<double> c;
      for (const auto& cost : inst.costs) {
        if (cost.kind != CostKind::Linear) {
          throw ConfigError("expected linear stage costs");
        }
        c.insert(c.end(), cost.c_lin.begin(), cost.c_lin.end());
      }
      return c;
    };
    driver.build_costs = [](const std::vector<double>& c_flat) {
      return im_costs_from_parameters(c_flat);
    };
    return driver;
  }

  if (config.problem == "example-e") {
    const ProblemInstance fixed = three_stage_example();
    driver.constraints = fixed.constraints;
    driver.training = [fixed](int) { return fixed; };
    driver.testing = [fixed](int) { return fixed; };
    driver.parameters = quadratic_shift_parameters;
    driver.build_costs = [](const std::vector<double>& p) {
      std::vector<CostFunction> costs;
      costs.reserve(p.size());
      // Rebuild in the expanded form the generator uses: (p+x)^2 - p^2.
      for (double pt : p) {
        costs.push_back(CostFunction::quadratic({pt}, -pt * pt));
      }
      return costs;
    };
    return driver;
  }

  if (config.problem == "random-isub") {
    // One random laminar shape per seed; training/test instances redraw the
    // stage costs on the fixed constraint structure.
    const int T = 16;
    const ProblemInstance shape = generate_random_isub_instance(
        stream_key(seed, kTagShape), T, CostFamily::Quadratic);
    driver.constraints = shape.constraints;
    std::vector<double> box_lower;
    box_lower.reserve(static_cast<std::size_t>(T));
    for (const auto& stage : shape.constraints.stages) {
      box_lower.push_back(stage.lower[0]);
    }
    auto materialize = [shape, box_lower](std::uint64_t cost_seed) {
      ProblemInstance inst = shape;
      inst.costs = random_isub_costs(cost_seed, box_lower,
                                     CostFamily::Quadratic);
      return inst;
    };
    driver.training = [seed, materialize](int k) {
      return materialize(
          stream_key(seed, kTagTrain, static_cast<std::uint64_t>(k)));
    };
    driver.testing = [seed, materialize](int k) {
      return materialize(
          stream_key(seed, kTagTest, static_cast<std::uint64_t>(k)));
    };
    driver.parameters = quadratic_shift_parameters;
    driver.build_costs = [](const std::vector<double>& p) {
      std::vector<CostFunction> costs;
      costs.reserve(p.size());
      for (double pt : p) costs.push_back(CostFunction::quadratic({pt}));
      return costs;
    };
    return driver;
  }

  throw ConfigError("unknown problem: " + config.problem);
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  if (n <= 0) return;
  int pool_size = workers > 0
                      ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  pool_size = std::max(1, std::min(pool_size, n));
  if (pool_size == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(pool_size));
  for (int w = 0; w < pool_size; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double safe_ratio(double online, double offline) {
  if (std::abs(offline) < 1e-12) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return online / offline;
}

// Interpolated quantile (R-7) over an ascending sample.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::set<std::string> problems = {"battery", "im", "example-e",
                                                 "random-isub"};
  if (problems.count(problem) == 0) {
    throw ConfigError("unknown problem: " + problem);
  }
  if (training_size < 1) throw ConfigError("training_size must be >= 1");
  if (test_count < 1) throw ConfigError("test_count must be >= 1");
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json");
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
  const auto& arms = canonical_arms();
  for (const auto& name : candidates) {
    if (std::find(arms.begin(), arms.end(), name) == arms.end()) {
      throw ConfigError("unknown candidate: " + name);
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ProblemDriver driver = make_driver(config);

  std::vector<std::string> arms = config.candidates;
  if (arms.empty()) arms = canonical_arms();
  // Deduplicate, canonical order.
  {
    std::vector<std::string> ordered;
    for (const auto& name : canonical_arms()) {
      if (std::find(arms.begin(), arms.end(), name) != arms.end()) {
        ordered.push_back(name);
      }
    }
    arms = std::move(ordered);
  }

  // Training: solve each training instance offline; keep multiplier vectors
  // and uncertain parameters.
  std::vector<MultiplierVector> trained(
      static_cast<std::size_t>(config.training_size));
  std::vector<std::vector<double>> parameters(
      static_cast<std::size_t>(config.training_size));
  parallel_for(config.training_size, config.workers, [&](int k) {
    ProblemInstance inst = driver.training(k);
    OfflineSolution sol;
    try {
      sol = solve_offline(inst);
    } catch (const Error& e) {
      throw SolverError("training instance " + std::to_string(k) + ": " +
                        e.what());
    }
    trained[static_cast<std::size_t>(k)] = sol.multipliers;
    parameters[static_cast<std::size_t>(k)] = driver.parameters(inst);
  });

  MultiplierHistory history{trained};
  history.validate();
  ParameterHistory parameter_history{parameters};
  parameter_history.validate();

  const NominalResult nominal =
      nominal_strategy(driver.constraints, parameter_history,
                       driver.build_costs);

  // Pre-resolve the order-statistic candidates once; exact is per-instance.
  std::map<std::string, MultiplierVector> fixed_predictions;
  for (const auto& name : arms) {
    if (name == "nominal") {
      fixed_predictions[name] = nominal.multipliers;
    } else if (name != "exact") {
      fixed_predictions[name] =
          candidate(history, candidate_kind_from_string(name));
    }
  }

  const bool structured =
      driver.constraints.structure.kind != StructureKind::General &&
      driver.constraints.scalar_stages();

  // Evaluation: one worker task per test instance, each filling its own
  // record slot; flattening afterwards keeps output thread-count invariant.
  std::vector<std::vector<RatioRecord>> slots(
      static_cast<std::size_t>(config.test_count));
  parallel_for(config.test_count, config.workers, [&](int k) {
    auto& out = slots[static_cast<std::size_t>(k)];
    auto record_failure = [&](const std::string& name, const std::string& err) {
      RatioRecord rec;
      rec.instance_id = k;
      rec.candidate = name;
      rec.error = err;
      out.push_back(std::move(rec));
    };

    ProblemInstance realized;
    OfflineSolution offline;
    try {
      realized = driver.testing(k);
      offline = solve_offline(realized);
    } catch (const Error& e) {
      record_failure("baseline", std::string("offline: ") + e.what());
      for (const auto& name : arms) {
        record_failure(name, std::string("offline: ") + e.what());
      }
      return;
    }

    {
      RatioRecord rec;
      rec.instance_id = k;
      rec.candidate = "baseline";
      rec.offline_objective = offline.objective;
      rec.online_objective = evaluate_objective(realized, nominal.x);
      rec.ratio = safe_ratio(rec.online_objective, rec.offline_objective);
      out.push_back(std::move(rec));
    }

    for (const auto& name : arms) {
      const MultiplierVector& prediction =
          name == "exact" ? offline.multipliers : fixed_predictions.at(name);
      try {
        OnlineTrace trace = run_online(realized, prediction);
        RatioRecord rec;
        rec.instance_id = k;
        rec.candidate = name;
        rec.online_objective = trace.objective;
        rec.offline_objective = offline.objective;
        rec.ratio = safe_ratio(trace.objective, offline.objective);
        if (structured) {
          rec.has_bound = true;
          rec.bound = make_bound_report(realized, prediction,
                                        offline.multipliers, trace.objective,
                                        offline.objective);
        }
        out.push_back(std::move(rec));
      } catch (const Error& e) {
        record_failure(name, e.what());
      }
    }
  });

  ExperimentResult result;
  result.config = config;
  result.config.candidates = arms;
  for (auto& slot : slots) {
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const RatioRecord& a, const RatioRecord& b) {
              if (a.instance_id != b.instance_id) {
                return a.instance_id < b.instance_id;
              }
              return arm_rank(a.candidate) < arm_rank(b.candidate);
            });

  // Summaries, recomputable from the records alone.
  std::map<int, double> baseline_ratio;
  for (const auto& rec : result.records) {
    if (rec.candidate == "baseline" && rec.error.empty()) {
      baseline_ratio[rec.instance_id] = rec.ratio;
    }
  }
  std::vector<std::string> summary_order = {"baseline"};
  summary_order.insert(summary_order.end(), arms.begin(), arms.end());
  for (const auto& name : summary_order) {
    CandidateSummary s;
    s.candidate = name;
    std::vector<double> ratios;
    int beat = 0, comparable = 0;
    for (const auto& rec : result.records) {
      if (rec.candidate != name) continue;
      if (!rec.error.empty()) {
        ++s.failures;
        continue;
      }
      ++s.count;
      if (std::isfinite(rec.ratio)) ratios.push_back(rec.ratio);
      auto it = baseline_ratio.find(rec.instance_id);
      if (name != "baseline" && it != baseline_ratio.end()) {
        ++comparable;
        if (rec.ratio < it->second) ++beat;
      }
    }
    std::sort(ratios.begin(), ratios.end());
    s.median = quantile(ratios, 0.5);
    s.q1 = quantile(ratios, 0.25);
    s.q3 = quantile(ratios, 0.75);
    s.min = ratios.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : ratios.front();
    s.max = ratios.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : ratios.back();
    s.success_rate_vs_nominal =
        (name == "baseline" || comparable == 0)
            ? std::numeric_limits<double>::quiet_NaN()
            : static_cast<double>(beat) / static_cast<double>(comparable);
    result.summaries.push_back(std::move(s));
  }
  return result;
}

ProblemInstance experiment_training_instance(const ExperimentConfig& config,
                                             int k) {
  config.validate();
  if (k < 0 || k >= config.training_size) {
    throw ConfigError("training index out of range");
  }
  return make_driver(config).training(k);
}

ProblemInstance experiment_test_instance(const ExperimentConfig& config,
                                         int k) {
  config.validate();
  if (k < 0 || k >= config.test_count) {
    throw ConfigError("test index out of range");
  }
  return make_driver(config).testing(k);
}

MultiplierHistory experiment_training_history(const ExperimentConfig& config) {
  config.validate();
  ProblemDriver driver = make_driver(config);
  MultiplierHistory history;
  history.entries.resize(static_cast<std::size_t>(config.training_size));
  parallel_for(config.training_size, config.workers, [&](int k) {
    history.entries[static_cast<std::size_t>(k)] =
        solve_offline(driver.training(k)).multipliers;
  });
  history.validate();
  return history;
}

ParameterHistory experiment_parameter_history(const ExperimentConfig& config) {
  config.validate();
  ProblemDriver driver = make_driver(config);
  ParameterHistory history;
  history.entries.resize(static_cast<std::size_t>(config.training_size));
  parallel_for(config.training_size, config.workers, [&](int k) {
    history.entries[static_cast<std::size_t>(k)] =
        driver.parameters(driver.training(k));
  });
  history.validate();
  return history;
}

std::string experiment_to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "instance_id,candidate,online_objective,offline_objective,ratio,"
         "bound_value,realized_gap,premise_satisfied,error\n";
  for (const auto& rec : result.records) {
    out << rec.instance_id << ',' << rec.candidate << ',';
    if (rec.error.empty()) {
      out << format_double(rec.online_objective) << ','
          << format_double(rec.offline_objective) << ','
          << format_double(rec.ratio) << ',';
      if (rec.has_bound) {
        out << format_double(rec.bound.bound_value) << ','
            << format_double(rec.bound.realized_gap) << ','
            << (rec.bound.premise_satisfied ? 1 : 0) << ',';
      } else {
        out << ",,,";
      }
      out << "\n";
    } else {
      out << ",,,,,," << csv_escape(rec.error) << "\n";
    }
  }
  return out.str();
}

nlohmann::json experiment_to_json(const ExperimentResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : result.records) {
    nlohmann::json j;
    j["instance_id"] = rec.instance_id;
    j["candidate"] = rec.candidate;
    if (rec.error.empty()) {
      j["online_objective"] = rec.online_objective;
      j["offline_objective"] = rec.offline_objective;
      j["ratio"] = rec.ratio;
      if (rec.has_bound) {
        j["bound"] = {{"value", rec.bound.bound_value},
                      {"realized_gap", rec.bound.realized_gap},
                      {"premise_satisfied", rec.bound.premise_satisfied}};
      }
    } else {
      j["error"] = rec.error;
    }
    records.push_back(std::move(j));
  }

  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    summaries.push_back({{"candidate", s.candidate},
                         {"count", s.count},
                         {"failures", s.failures},
                         {"median", s.median},
                         {"q1", s.q1},
                         {"q3", s.q3},
                         {"min", s.min},
                         {"max", s.max},
                         {"success_rate_vs_nominal",
                          s.success_rate_vs_nominal}});
  }

  return nlohmann::json{
      {"config",
       {{"problem", result.config.problem},
        {"training_size", result.config.training_size},
        {"candidates", result.config.candidates},
        {"test_count", result.config.test_count},
        {"seed", result.config.seed},
        {"format", result.config.format},
        {"workers", result.config.workers}}},
      {"records", std::move(records)},
      {"summaries", std::move(summaries)}};
}

namespace {

void check(SuiteResult& suite, bool ok, const std::string& what) {
  if (ok) {
    ++suite.passed;
  } else {
    ++suite.failed;
    if (suite.failures.size() < 10) suite.failures.push_back(what);
  }
}

CostFamily family_for(int k) {
  switch (k % 3) {
    case 0: return CostFamily::Quadratic;
    case 1: return CostFamily::Power;
    default: return CostFamily::Exponential;
  }
}

// Component-wise under-prediction of m_star with exp-safe margins: mu is
// scaled toward zero, lambda shifted down.
MultiplierVector sample_underprediction(const MultiplierVector& m_star,
                                        HashRng& rng) {
  MultiplierVector m = m_star;
  for (auto& mu : m.mu) mu *= rng.uniform();
  for (auto& lam : m.lambda) lam -= rng.uniform(0.0, 0.5);
  return m;
}

SuiteResult suite_lemmas(std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "lemmas";

  // Local Lagrangian solutions are nonincreasing in the multipliers.
  for (int k = 0; k < 200; ++k) {
    const int T = 2 + k % 5;
    ProblemInstance inst = generate_random_isub_instance(
        stream_key(seed, kTagSuite, 1, static_cast<std::uint64_t>(k)), T,
        family_for(k));
    HashRng rng(stream_key(seed, kTagSuite, 2, static_cast<std::uint64_t>(k)));
    MultiplierVector m1 = MultiplierVector::zeros(inst.constraints);
    MultiplierVector m2 = m1;
    double mu2_total = 0.0;
    for (std::size_t j = 0; j < m1.mu.size(); ++j) {
      m1.mu[j] = rng.uniform(0.0, 0.3);
      m2.mu[j] = m1.mu[j] + rng.uniform(0.0, 0.3);
      mu2_total += m2.mu[j];
    }
    // Keep nu = -(sum mu + lambda) strictly positive for both vectors so the
    // exponential gradient inverse stays in-domain.
    const double lam2 = -(mu2_total + 0.05 + rng.uniform(0.0, 0.5));
    const double lam1 = lam2 - rng.uniform(0.0, 0.5);
    for (std::size_t j = 0; j < m1.lambda.size(); ++j) {
      m1.lambda[j] = lam1;
      m2.lambda[j] = lam2;
    }
    bool ok = true;
    for (int t = 0; t < T && ok; ++t) {
      const double x1 = local_lagrangian_solution(inst, t, m1)[0];
      const double x2 = local_lagrangian_solution(inst, t, m2)[0];
      ok = x1 >= x2 - 1e-9;
    }
    check(suite, ok, "monotonicity violated, sample " + std::to_string(k));
  }

  // Under under-prediction, the online decisions never exceed the local
  // Lagrangian solutions at the same multipliers.
  for (int k = 0; k < 200; ++k) {
    const int T = 2 + k % 5;
    const std::string tag = "dominance, sample " + std::to_string(k);
    try {
      ProblemInstance inst = generate_random_isub_instance(
          stream_key(seed, kTagSuite, 3, static_cast<std::uint64_t>(k)), T,
          family_for(k));
      OfflineSolution off = solve_offline(inst);
      HashRng rng(
          stream_key(seed, kTagSuite, 4, static_cast<std::uint64_t>(k)));
      MultiplierVector m_hat = sample_underprediction(off.multipliers, rng);
      OnlineTrace trace = run_online(inst, m_hat);
      bool ok = true;
      for (int t = 0; t < T && ok; ++t) {
        const double local = local_lagrangian_solution(inst, t, m_hat)[0];
        ok = trace.x[static_cast<std::size_t>(t)][0] <= local + 1e-9;
      }
      check(suite, ok, tag);
    } catch (const Error& e) {
      check(suite, false, tag + ": " + e.what());
    }
  }
  return suite;
}

SuiteResult suite_bounds(std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "bounds";

  // Realized regret never exceeds the under-prediction bound.
  for (int k = 0; k < 100; ++k) {
    const int T = 2 + k % 7;
    const CostFamily family =
        k % 2 == 0 ? CostFamily::Quadratic : CostFamily::Power;
    const std::string tag = "gap bound, sample " + std::to_string(k);
    try {
      ProblemInstance inst = generate_random_isub_instance(
          stream_key(seed, kTagSuite, 5, static_cast<std::uint64_t>(k)), T,
          family);
      OfflineSolution off = solve_offline(inst);
      HashRng rng(
          stream_key(seed, kTagSuite, 6, static_cast<std::uint64_t>(k)));
      MultiplierVector m_hat = sample_underprediction(off.multipliers, rng);
      OnlineTrace trace = run_online(inst, m_hat);
      const double gap = trace.objective - off.objective;
      const double bound = theorem1_bound(inst, m_hat, off.multipliers);
      check(suite, std::isfinite(bound) && gap <= bound + 1e-8, tag);
    } catch (const Error& e) {
      check(suite, false, tag + ": " + e.what());
    }
  }

  // The specialized bound forms agree with the general one.
  for (int k = 0; k < 100; ++k) {
    const bool exponential = k >= 50;
    const int T = 2 + k % 6;
    const std::string tag = std::string(exponential ? "exp" : "power") +
                            " bound consistency, sample " + std::to_string(k);
    try {
      ProblemInstance inst = generate_random_isub_instance(
          stream_key(seed, kTagSuite, 7, static_cast<std::uint64_t>(k)), T,
          exponential ? CostFamily::Exponential : CostFamily::Power);
      OfflineSolution off = solve_offline(inst);
      HashRng rng(
          stream_key(seed, kTagSuite, 8, static_cast<std::uint64_t>(k)));
      MultiplierVector m_hat = sample_underprediction(off.multipliers, rng);

      const double general = theorem1_bound(inst, m_hat, off.multipliers);

      std::vector<BaseFunction> bases;
      std::vector<double> a;
      for (const auto& cost : inst.costs) {
        bases.push_back(cost.base);
        a.push_back(cost.a);
      }
      const double separable =
          separable_bound(bases, a, inst.constraints, m_hat, off.multipliers);

      const auto nu_hat = nu_values(inst.constraints, m_hat);
      const auto nu_star = nu_values(inst.constraints, off.multipliers);
      std::vector<double> nh, ns;
      for (int t = 0; t < inst.T(); ++t) {
        nh.push_back(nu_hat[static_cast<std::size_t>(t)][0]);
        ns.push_back(nu_star[static_cast<std::size_t>(t)][0]);
      }
      const double special =
          exponential
              ? exp_bound(a, nh, ns)
              : power_bound(inst.costs[0].base.K, inst.costs[0].base.c, a, nh,
                            ns);

      const double scale =
          std::max({1.0, std::abs(general), std::abs(special)});
      const bool ok = std::abs(general - separable) <= 1e-10 * scale &&
                      std::abs(separable - special) <= 1e-10 * scale;
      check(suite, ok, tag);
    } catch (const Error& e) {
      check(suite, false, tag + ": " + e.what());
    }
  }
  return suite;
}

SuiteResult suite_projection(std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "projection";

  for (int k = 0; k < 50; ++k) {
    const std::string tag = "battery toy " + std::to_string(k);
    try {
      HashRng rng(
          stream_key(seed, kTagSuite, 9, static_cast<std::uint64_t>(k)));
      BatteryParams params;
      params.T = 2 + k % 5;
      const double dts[3] = {0.25, 0.5, 1.0};
      params.dt = dts[rng.uniform_int(0, 2)];
      for (int t = 0; t < params.T; ++t) {
        params.l.push_back(-rng.uniform(0.5, 2.5));
        params.u.push_back(rng.uniform(0.5, 2.5));
        params.p.push_back(rng.uniform(0.0, 2.0));
      }
      for (int t = 0; t + 1 < params.T; ++t) {
        params.C_lo.push_back(-rng.uniform(0.5, 3.0));
        params.C_hi.push_back(rng.uniform(0.5, 3.0));
      }
      params.C_end = 0.0;
      ProblemInstance inst = build_battery_instance(params);

      // The materialized rows carry rhs/dt with unit coefficients, so the
      // recursion runs in those units with a unit step.
      std::vector<double> band_lo, band_hi;
      for (int t = 0; t + 1 < params.T; ++t) {
        band_lo.push_back(params.C_lo[static_cast<std::size_t>(t)] /
                          params.dt);
        band_hi.push_back(params.C_hi[static_cast<std::size_t>(t)] /
                          params.dt);
      }
      const CapacityBounds bounds = battery_projection_bounds(
          1.0, params.l, params.u, band_lo, band_hi, params.C_end / params.dt);

      // Walks the horizon along a random feasible trajectory; at each stage
      // the O(1) recursion interval, the FME interval, and a
      // feasible-completion probe must agree.  The probe extends the prefix
      // with the candidate value, completes the horizon greedily along the
      // recursion bands, and judges the assembled vector against the real
      // constraint rows — so it cannot inherit a recursion bug.
      auto has_feasible_completion =
          [&](int t_bar, double value,
              const std::vector<std::vector<double>>& pref) {
            std::vector<std::vector<double>> full = pref;
            full.push_back({value});
            double running = 0.0;
            for (const auto& xs : full) running += xs[0];
            for (int s = t_bar + 1; s < params.T; ++s) {
              StageInterval next;
              try {
                next = battery_stage_interval(bounds, 1.0, params.l, params.u,
                                              s, running);
              } catch (const InfeasibleError&) {
                return false;
              }
              const double xs = 0.5 * (next.lo + next.hi);
              full.push_back({xs});
              running += xs;
            }
            return check_feasibility(inst.constraints, full, 1e-6).feasible;
          };

      bool ok = true;
      std::vector<std::vector<double>> prefix;
      double running = 0.0;
      for (int t = 0; t < params.T && ok; ++t) {
        const StageInterval recursion = battery_stage_interval(
            bounds, 1.0, params.l, params.u, t, running);
        const StageInterval fme = project_onto_stage(inst.constraints, prefix, t);
        ok = std::abs(recursion.lo - fme.lo) <= 1e-9 &&
             std::abs(recursion.hi - fme.hi) <= 1e-9;
        if (ok) {
          ok = has_feasible_completion(t, recursion.lo, prefix) &&
               has_feasible_completion(t, recursion.hi, prefix);
        }
        if (ok && t + 1 < params.T) {
          // A value clearly outside the interval must have no completion.
          const double span = std::max(1.0, recursion.hi - recursion.lo);
          const double outside = recursion.hi + 0.05 * span;
          if (outside <= params.u[static_cast<std::size_t>(t)]) {
            ok = !has_feasible_completion(t, outside, prefix);
          }
        }
        const double x =
            recursion.lo + rng.uniform() * (recursion.hi - recursion.lo);
        prefix.push_back({x});
        running += x;
      }
      check(suite, ok, tag);
    } catch (const Error& e) {
      check(suite, false, tag + ": " + e.what());
    }
  }
  return suite;
}

double max_gradient_over_box(const ProblemInstance& inst) {
  double g = 0.0;
  for (int t = 0; t < inst.T(); ++t) {
    const auto& stage = inst.constraints.stages[static_cast<std::size_t>(t)];
    const auto& cost = inst.costs[static_cast<std::size_t>(t)];
    for (const auto& corner : {stage.lower, stage.upper}) {
      const auto grad = cost.gradient(corner);
      for (double gi : grad) g = std::max(g, std::abs(gi));
    }
  }
  return g;
}

SuiteResult suite_oracle(std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "oracle";

  for (int k = 0; k < 50; ++k) {
    const std::string tag = "oracle check " + std::to_string(k);
    try {
      ProblemInstance inst;
      double resolution = 0.0;
      HashRng rng(
          stream_key(seed, kTagSuite, 10, static_cast<std::uint64_t>(k)));
      if (k % 3 == 0) {
        // Small laminar instance, strictly convex costs.
        const int T = 2 + k % 3;
        inst = generate_random_isub_instance(
            stream_key(seed, kTagSuite, 11, static_cast<std::uint64_t>(k)), T,
            k % 2 == 0 ? CostFamily::Quadratic : CostFamily::Power);
        resolution = 0.01;
      } else if (k % 3 == 1) {
        // Small battery chain.
        BatteryParams params;
        params.T = 3 + k % 2;
        params.dt = 1.0;
        for (int t = 0; t < params.T; ++t) {
          params.l.push_back(-2.0);
          params.u.push_back(2.0);
          params.p.push_back(rng.uniform(0.0, 2.0));
        }
        for (int t = 0; t + 1 < params.T; ++t) {
          params.C_lo.push_back(-3.0);
          params.C_hi.push_back(3.0);
        }
        params.C_end = 0.0;
        inst = build_battery_instance(params);
        resolution = 0.02;
      } else {
        // Single-stage production plan: a three-variable LP.
        ImParams params;
        params.T = 1;
        inst = generate_im_instance(
            stream_key(seed, kTagSuite, 12, static_cast<std::uint64_t>(k)),
            params);
        resolution = 2.0;
      }

      OfflineSolution sol = solve_offline(inst);
      OracleResult oracle = brute_force_oracle(inst, resolution);
      const double tol = 2.0 * resolution * max_gradient_over_box(inst);
      const bool ok = std::abs(sol.objective - oracle.objective) <= tol &&
                      sol.kkt.max_residual <= 1e-6;
      check(suite, ok,
            tag + ": solver " + format_double(sol.objective) + " oracle " +
                format_double(oracle.objective) + " tol " +
                format_double(tol));
    } catch (const Error& e) {
      check(suite, false, tag + ": " + e.what());
    }
  }
  return suite;
}

}  // namespace

SuiteResult verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "lemmas") return suite_lemmas(seed);
  if (suite == "bounds") return suite_bounds(seed);
  if (suite == "projection") return suite_projection(seed);
  if (suite == "oracle") return suite_oracle(seed);
  throw ConfigError("unknown verify suite: " + suite);
}

}  // namespace oddo
