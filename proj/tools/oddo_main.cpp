#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oddo/errors.hpp"
#include "oddo/experiment.hpp"
#include "oddo/model.hpp"
#include "oddo/offline.hpp"
#include "oddo/online.hpp"
#include "oddo/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;  // infeasibility, domain, failed checks
constexpr int kExitConfig = 2;     // bad flags or malformed input
constexpr int kExitSolver = 3;     // solver breakdown

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw oddo::ConfigError("cannot open for writing: " + path);
  out << text;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  oddo::save_json_file(path, j);
}

std::string indexed_name(const std::string& prefix, int k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%03d.json", prefix.c_str(), k);
  return buf;
}

oddo::Strategy parse_strategy(const std::string& name) {
  if (name == "auto") return oddo::Strategy::Auto;
  if (name == "projected") return oddo::Strategy::Projected;
  if (name == "full") return oddo::Strategy::Full;
  throw oddo::ConfigError("unknown strategy: " + name);
}

int cmd_generate(const oddo::ExperimentConfig& config,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (out_dir.empty()) {
    throw oddo::ConfigError("generate requires --out directory");
  }
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  for (int k = 0; k < config.training_size; ++k) {
    oddo::save_json_file(
        (dir / indexed_name("train", k)).string(),
        oddo::instance_to_json(oddo::experiment_training_instance(config, k)));
  }
  for (int k = 0; k < config.test_count; ++k) {
    oddo::save_json_file(
        (dir / indexed_name("test", k)).string(),
        oddo::instance_to_json(oddo::experiment_test_instance(config, k)));
  }
  oddo::save_json_file(
      (dir / "multiplier_history.json").string(),
      oddo::multiplier_history_to_json(
          oddo::experiment_training_history(config)));
  oddo::save_json_file(
      (dir / "parameter_history.json").string(),
      oddo::parameter_history_to_json(
          oddo::experiment_parameter_history(config)));
  oddo::save_json_file((dir / "config.json").string(),
                       {{"problem", config.problem},
                        {"training_size", config.training_size},
                        {"test_count", config.test_count},
                        {"seed", config.seed}});
  std::cerr << "wrote " << config.training_size << " training and "
            << config.test_count << " test instances to " << out_dir << "\n";
  return kExitOk;
}

int cmd_evaluate(const oddo::ExperimentConfig& config,
                 const std::string& out_path) {
  const oddo::ExperimentResult result = oddo::run_experiment(config);
  if (config.format == "csv") {
    write_text(out_path, oddo::experiment_to_csv(result));
  } else {
    write_json(out_path, oddo::experiment_to_json(result));
  }

  // Human-readable digest on stderr; the machine artifact above stays clean.
  std::cerr << "candidate        count fail   median       q1       q3      "
               "min      max  success\n";
  for (const auto& s : result.summaries) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-16s %5d %4d %8.4f %8.4f %8.4f %8.4f %8.4f %8.3f\n",
                  s.candidate.c_str(), s.count, s.failures, s.median, s.q1,
                  s.q3, s.min, s.max, s.success_rate_vs_nominal);
    std::cerr << line;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = {"lemmas", "bounds", "projection", "oracle"};
  } else {
    suites = {suite};
  }
  bool all_ok = true;
  for (const auto& name : suites) {
    const oddo::SuiteResult r = oddo::verify_suite(name, seed);
    std::cout << r.name << ": " << r.passed << " passed, " << r.failed
              << " failed\n";
    for (const auto& f : r.failures) std::cout << "  FAIL " << f << "\n";
    all_ok = all_ok && r.failed == 0;
  }
  return all_ok ? kExitOk : kExitInvariant;
}

int cmd_solve_offline(const std::string& in_path, const std::string& out_path) {
  const oddo::ProblemInstance instance =
      oddo::instance_from_json(oddo::load_json_file(in_path));
  const oddo::OfflineSolution sol = oddo::solve_offline(instance);
  write_json(out_path, oddo::offline_solution_to_json(sol));
  return kExitOk;
}

int cmd_run_online(const std::string& in_path, const std::string& prediction_path,
                   const std::string& stream_path, const std::string& strategy,
                   const std::string& out_path) {
  const oddo::ProblemInstance instance =
      oddo::instance_from_json(oddo::load_json_file(in_path));
  const oddo::MultiplierVector prediction =
      oddo::multipliers_from_json(oddo::load_json_file(prediction_path));
  const oddo::Strategy strat = parse_strategy(strategy);

  oddo::OnlineTrace trace;
  if (stream_path.empty()) {
    trace = oddo::run_online(instance, prediction, strat);
  } else {
    std::ifstream in(stream_path);
    if (!in) throw oddo::ConfigError("cannot open stream: " + stream_path);
    oddo::VectorCostStream stream(oddo::read_cost_stream(in));
    trace = oddo::run_online(instance.constraints, stream, prediction, strat);
  }
  write_json(out_path, oddo::online_trace_to_json(trace));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stage-coupled convex decision problems: offline solvers, an online "
      "multiplier-driven engine, and experiment tooling"};
  app.require_subcommand(1);

  oddo::ExperimentConfig config;
  std::string out_path;
  std::string in_path;
  std::string prediction_path;
  std::string stream_path;
  std::string strategy = "auto";
  std::string suite = "all";

  auto add_problem_flags = [&config](CLI::App* cmd) {
    cmd->add_option("--problem", config.problem,
                    "battery | im | example-e | random-isub")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "base RNG seed")
        ->capture_default_str();
    cmd->add_option("--training-size", config.training_size,
                    "number of training instances")
        ->capture_default_str();
    cmd->add_option("--tests", config.test_count, "number of test instances")
        ->capture_default_str();
  };

  CLI::App* generate = app.add_subcommand(
      "generate", "Write seeded instances and training histories");
  add_problem_flags(generate);
  generate->add_option("--out", out_path, "output directory")->required();

  CLI::App* evaluate = app.add_subcommand(
      "evaluate",
      "Train multiplier candidates, race them against the offline optimum");
  add_problem_flags(evaluate);
  evaluate->add_option("--candidate", config.candidates,
                       "min | max | mean | median | nominal | exact "
                       "(repeatable; default all)");
  evaluate->add_option("--format", config.format, "csv | json")
      ->capture_default_str();
  evaluate->add_option("--workers", config.workers,
                       "worker threads (0 = hardware)")
      ->capture_default_str();
  evaluate->add_option("--out", out_path,
                       "output file (default: stdout)");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run a seeded invariant suite and report pass/fail");
  verify->add_option("--suite", suite,
                     "lemmas | bounds | projection | oracle | all")
      ->capture_default_str();
  verify->add_option("--seed", config.seed, "base RNG seed")
      ->capture_default_str();

  CLI::App* solve = app.add_subcommand(
      "solve-offline", "Solve an instance file to optimality with duals");
  solve->add_option("--in", in_path, "instance JSON file")->required();
  solve->add_option("--out", out_path, "solution file (default: stdout)");

  CLI::App* online = app.add_subcommand(
      "run-online", "Replay costs stage by stage under a multiplier prediction");
  online->add_option("--in", in_path, "instance JSON file")->required();
  online->add_option("--prediction", prediction_path,
                     "multiplier vector JSON file")
      ->required();
  online->add_option("--stream", stream_path,
                     "JSONL cost stream (default: the instance's own costs)");
  online->add_option("--strategy", strategy, "auto | projected | full")
      ->capture_default_str();
  online->add_option("--out", out_path, "trace file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(config, out_path);
    if (evaluate->parsed()) return cmd_evaluate(config, out_path);
    if (verify->parsed()) return cmd_verify(suite, config.seed);
    if (solve->parsed()) return cmd_solve_offline(in_path, out_path);
    if (online->parsed()) {
      return cmd_run_online(in_path, prediction_path, stream_path, strategy,
                            out_path);
    }
  } catch (const oddo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const oddo::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const oddo::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const oddo::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}
