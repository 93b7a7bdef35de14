#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "oddo/model.hpp"
#include "oddo/offline_types.hpp"
#include "oddo/online.hpp"
#include "oddo/predictors.hpp"

namespace oddo {

// JSON codecs for the on-disk formats (documented in docs/file-formats.md).
// Round trips are exact: doubles are emitted with shortest-round-trip
// formatting by the JSON library.

nlohmann::json cost_to_json(const CostFunction& f);
CostFunction cost_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json multipliers_to_json(const MultiplierVector& m);
MultiplierVector multipliers_from_json(const nlohmann::json& j);

nlohmann::json offline_solution_to_json(const OfflineSolution& sol);
nlohmann::json online_trace_to_json(const OnlineTrace& trace);

nlohmann::json multiplier_history_to_json(const MultiplierHistory& h);
MultiplierHistory multiplier_history_from_json(const nlohmann::json& j);
nlohmann::json parameter_history_to_json(const ParameterHistory& h);
ParameterHistory parameter_history_from_json(const nlohmann::json& j);

// Cost streams on disk are JSON Lines: one {"t": <stage>, "cost": {...}}
// record per line, in stage order.
std::vector<CostFunction> read_cost_stream(std::istream& in);
void write_cost_stream(std::ostream& out,
                       const std::vector<CostFunction>& costs);

// File helpers (throw ConfigError on I/O or parse problems).
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace oddo
