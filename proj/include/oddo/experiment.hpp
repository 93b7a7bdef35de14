#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "oddo/bounds.hpp"
#include "oddo/model.hpp"
#include "oddo/predictors.hpp"

namespace oddo {

// One evaluation campaign: train multiplier predictions on training_size
// solved instances, then race the candidate arms against the offline optimum
// on test_count fresh instances of the same problem.
struct ExperimentConfig {
  std::string problem = "im";  // battery | im | example-e | random-isub
  int training_size = 10;
  // Arms to evaluate: subset of {min, max, mean, median, nominal, exact};
  // empty means all of them.  The applied-nominal baseline is always run.
  std::vector<std::string> candidates;
  int test_count = 10;
  std::uint64_t seed = 1;
  std::string format = "csv";  // csv | json
  int workers = 0;             // 0 = hardware concurrency

  void validate() const;
};

struct RatioRecord {
  int instance_id = 0;
  std::string candidate;
  double online_objective = 0.0;
  double offline_objective = 0.0;
  double ratio = 0.0;
  bool has_bound = false;
  BoundReport bound;
  std::string error;  // nonempty when this arm failed; other fields unset
};

struct CandidateSummary {
  std::string candidate;
  int count = 0;
  int failures = 0;
  double median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
  // Fraction of instances where this arm's ratio beats the applied-nominal
  // baseline (NaN for the baseline row itself).
  double success_rate_vs_nominal = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RatioRecord> records;  // sorted by (instance_id, candidate)
  std::vector<CandidateSummary> summaries;
};

// Generates, trains, evaluates.  Test instances run on a worker pool;
// records are id-sorted afterwards so output is order-independent.
ExperimentResult run_experiment(const ExperimentConfig& config);

// The exact instances run_experiment would use, exposed so the CLI's
// generate command and external tooling can materialize them as files.
ProblemInstance experiment_training_instance(const ExperimentConfig& config,
                                             int k);
ProblemInstance experiment_test_instance(const ExperimentConfig& config,
                                         int k);

// Solves the training instances and collects their optimal multipliers
// (the raw material for the order-statistic candidates).
MultiplierHistory experiment_training_history(const ExperimentConfig& config);
ParameterHistory experiment_parameter_history(const ExperimentConfig& config);

std::string experiment_to_csv(const ExperimentResult& result);
nlohmann::json experiment_to_json(const ExperimentResult& result);

// Seeded invariant batches behind the `verify` subcommand.
struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;  // one line per failed check
};

// suite: lemmas | bounds | projection | oracle
SuiteResult verify_suite(const std::string& suite, std::uint64_t seed);

}  // namespace oddo
