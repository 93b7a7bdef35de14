#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "oddo/errors.hpp"
#include "oddo/experiment.hpp"
#include "oddo/offline.hpp"
#include "oddo/online.hpp"
#include "oddo/predictors.hpp"
#include "oddo/problems.hpp"
#include "oddo/serialize.hpp"

namespace py = pybind11;

namespace {

// nlohmann::json <-> native Python objects, so the bindings can reuse the
// library's JSON codecs instead of mirroring every struct.
py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
      }
      return out;
    }
    default:
      throw oddo::ConfigError("unsupported JSON value");
  }
}

nlohmann::json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& item : obj) out.push_back(py_to_json(item));
    return out;
  }
  if (py::isinstance<py::dict>(obj)) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& item : obj.cast<py::dict>()) {
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    }
    return out;
  }
  throw oddo::ConfigError("unsupported Python value in JSON conversion");
}

oddo::ProblemInstance instance_from_py(const py::dict& d) {
  return oddo::instance_from_json(py_to_json(d));
}

py::object generate_instance(const std::string& problem, std::uint64_t seed,
                             int index) {
  oddo::ProblemInstance inst;
  if (problem == "battery") {
    inst = oddo::generate_battery_instance(seed, index);
  } else if (problem == "im") {
    inst = oddo::generate_im_instance(seed);
  } else if (problem == "random-isub") {
    inst = oddo::generate_random_isub_instance(seed, 8,
                                               oddo::CostFamily::Quadratic);
  } else if (problem == "example-e") {
    inst = oddo::three_stage_example();
  } else {
    throw oddo::ConfigError("unknown problem: " + problem);
  }
  return json_to_py(oddo::instance_to_json(inst));
}

py::object solve_offline_py(const py::dict& instance) {
  return json_to_py(
      oddo::offline_solution_to_json(oddo::solve_offline(instance_from_py(instance))));
}

py::object run_online_py(const py::dict& instance, const py::dict& multipliers,
                         const std::string& strategy) {
  oddo::Strategy strat = oddo::Strategy::Auto;
  if (strategy == "projected") strat = oddo::Strategy::Projected;
  else if (strategy == "full") strat = oddo::Strategy::Full;
  else if (strategy != "auto") {
    throw oddo::ConfigError("unknown strategy: " + strategy);
  }
  const oddo::OnlineTrace trace =
      oddo::run_online(instance_from_py(instance),
                       oddo::multipliers_from_json(py_to_json(multipliers)),
                       strat);
  return json_to_py(oddo::online_trace_to_json(trace));
}

py::object candidate_py(const py::list& multipliers, const std::string& kind) {
  oddo::MultiplierHistory history;
  for (const auto& item : multipliers) {
    history.entries.push_back(
        oddo::multipliers_from_json(py_to_json(item)));
  }
  const oddo::MultiplierVector m =
      oddo::candidate(history, oddo::candidate_kind_from_string(kind));
  return json_to_py(oddo::multipliers_to_json(m));
}

double theorem1_bound_py(const py::dict& instance, const py::dict& m_hat,
                         const py::dict& m_star) {
  return oddo::theorem1_bound(
      instance_from_py(instance),
      oddo::multipliers_from_json(py_to_json(m_hat)),
      oddo::multipliers_from_json(py_to_json(m_star)));
}

py::object verify_py(const std::string& suite, std::uint64_t seed) {
  const oddo::SuiteResult r = oddo::verify_suite(suite, seed);
  py::dict out;
  out["name"] = r.name;
  out["passed"] = r.passed;
  out["failed"] = r.failed;
  py::list failures;
  for (const auto& f : r.failures) failures.append(py::str(f));
  out["failures"] = failures;
  return out;
}

py::object evaluate_py(const std::string& problem, int training_size,
                       const std::vector<std::string>& candidates,
                       int test_count, std::uint64_t seed, int workers) {
  oddo::ExperimentConfig config;
  config.problem = problem;
  config.training_size = training_size;
  config.candidates = candidates;
  config.test_count = test_count;
  config.seed = seed;
  config.workers = workers;
  return json_to_py(oddo::experiment_to_json(oddo::run_experiment(config)));
}

}  // namespace

PYBIND11_MODULE(_oddo, m) {
  m.doc() =
      "Stage-coupled convex decision problems: offline solvers and the "
      "multiplier-driven online engine";

  py::register_exception<oddo::ConfigError>(m, "ConfigError",
                                            PyExc_ValueError);
  py::register_exception<oddo::DomainError>(m, "DomainError",
                                            PyExc_ArithmeticError);
  py::register_exception<oddo::InfeasibleError>(m, "InfeasibleError",
                                                PyExc_RuntimeError);
  py::register_exception<oddo::SolverError>(m, "SolverError",
                                            PyExc_RuntimeError);

  m.def("generate_instance", &generate_instance,
        "Seeded instance of a named problem family as a dict", py::arg("problem"),
        py::arg("seed") = 1, py::arg("index") = 0);
  m.def("solve_offline", &solve_offline_py,
        "Solve an instance dict to optimality; returns x, multipliers, "
        "objective and KKT residuals",
        py::arg("instance"));
  m.def("run_online", &run_online_py,
        "Fix decisions stage by stage under a multiplier prediction",
        py::arg("instance"), py::arg("multipliers"),
        py::arg("strategy") = "auto");
  m.def("candidate", &candidate_py,
        "Component-wise order statistic over a list of multiplier dicts",
        py::arg("multipliers"), py::arg("kind"));
  m.def("theorem1_bound", &theorem1_bound_py,
        "Regret bound for an under-predicted multiplier vector",
        py::arg("instance"), py::arg("m_hat"), py::arg("m_star"));
  m.def("verify", &verify_py, "Run a seeded invariant suite",
        py::arg("suite"), py::arg("seed") = 1);
  m.def("evaluate", &evaluate_py,
        "Train candidates and race them against the offline optimum",
        py::arg("problem"), py::arg("training_size") = 10,
        py::arg("candidates") = std::vector<std::string>{},
        py::arg("test_count") = 10, py::arg("seed") = 1,
        py::arg("workers") = 0);
}
