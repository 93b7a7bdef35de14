#include "oddo/serialize.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "oddo/errors.hpp"

namespace oddo {

using nlohmann::json;

namespace {

BaseKind base_kind_from_string(const std::string& s) {
  if (s == "power") return BaseKind::Power;
  if (s == "exponential") return BaseKind::Exponential;
  if (s == "square") return BaseKind::Square;
  throw ConfigError("unknown base function kind: " + s);
}

StructureKind structure_kind_from_string(const std::string& s) {
  if (s == "general") return StructureKind::General;
  if (s == "rap") return StructureKind::Rap;
  if (s == "laminar") return StructureKind::Laminar;
  if (s == "battery_chain") return StructureKind::BatteryChain;
  throw ConfigError("unknown structure kind: " + s);
}

json coupling_to_json(const LinearCoupling& row) {
  json j;
  j["coeffs"] = row.coeffs;
  j["rhs"] = row.rhs;
  return j;
}

LinearCoupling coupling_from_json(const json& j) {
  LinearCoupling row;
  row.coeffs = j.at("coeffs").get<std::vector<std::vector<double>>>();
  row.rhs = j.at("rhs").get<double>();
  return row;
}

}  // namespace

json cost_to_json(const CostFunction& f) {
  json j;
  j["kind"] = to_string(f.kind);
  j["offset"] = f.offset;
  switch (f.kind) {
    case CostKind::Quadratic:
      j["p"] = f.p;
      break;
    case CostKind::ScaledShifted:
      j["base"] = {{"kind", to_string(f.base.kind)},
                   {"K", f.base.K},
                   {"c", f.base.c}};
      j["a"] = f.a;
      j["b"] = f.b;
      break;
    case CostKind::Linear:
      j["c"] = f.c_lin;
      break;
  }
  return j;
}

CostFunction cost_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double offset = j.value("offset", 0.0);
  if (kind == "quadratic") {
    return CostFunction::quadratic(j.at("p").get<std::vector<double>>(),
                                   offset);
  }
  if (kind == "scaled_shifted") {
    BaseFunction base;
    base.kind = base_kind_from_string(j.at("base").at("kind").get<std::string>());
    base.K = j.at("base").at("K").get<double>();
    base.c = j.at("base").value("c", 2.0);
    return CostFunction::scaled_shifted(base, j.at("a").get<double>(),
                                        j.at("b").get<double>(), offset);
  }
  if (kind == "linear") {
    return CostFunction::linear(j.at("c").get<std::vector<double>>(), offset);
  }
  throw ConfigError("unknown cost kind: " + kind);
}

json instance_to_json(const ProblemInstance& instance) {
  const InstanceConstraints& con = instance.constraints;
  json j;
  j["T"] = con.T;
  json stages = json::array();
  for (int t = 0; t < con.T; ++t) {
    const StageSet& box = con.stages[static_cast<std::size_t>(t)];
    stages.push_back({{"lower", box.lower},
                      {"upper", box.upper},
                      {"cost", cost_to_json(instance.costs[static_cast<std::size_t>(t)])}});
  }
  j["stages"] = std::move(stages);
  json ineq = json::array();
  for (const LinearCoupling& row : con.coupling.inequalities) {
    ineq.push_back(coupling_to_json(row));
  }
  j["inequalities"] = std::move(ineq);
  json eq = json::array();
  for (const LinearCoupling& row : con.coupling.equalities) {
    eq.push_back(coupling_to_json(row));
  }
  j["equalities"] = std::move(eq);

  const InstanceStructure& st = con.structure;
  json sets = json::array();
  for (const SetCapacity& sc : st.sets) {
    sets.push_back({{"members", sc.members},
                    {"lo", sc.lo},
                    {"hi", sc.hi},
                    {"row_lo", sc.row_lo},
                    {"row_hi", sc.row_hi}});
  }
  j["structure"] = {{"kind", to_string(st.kind)},
                    {"ground_rhs", st.ground_rhs},
                    {"ground_row", st.ground_row},
                    {"sets", std::move(sets)},
                    {"increasing_costs", st.increasing_costs},
                    {"dt", st.dt}};
  j["metadata"] = instance.metadata;
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance instance;
  InstanceConstraints& con = instance.constraints;
  con.T = j.at("T").get<int>();
  for (const json& stage : j.at("stages")) {
    StageSet box;
    box.lower = stage.at("lower").get<std::vector<double>>();
    box.upper = stage.at("upper").get<std::vector<double>>();
    con.stages.push_back(std::move(box));
    instance.costs.push_back(cost_from_json(stage.at("cost")));
  }
  for (const json& row : j.at("inequalities")) {
    con.coupling.inequalities.push_back(coupling_from_json(row));
  }
  for (const json& row : j.at("equalities")) {
    con.coupling.equalities.push_back(coupling_from_json(row));
  }
  if (j.contains("structure")) {
    const json& s = j.at("structure");
    InstanceStructure& st = con.structure;
    st.kind = structure_kind_from_string(s.at("kind").get<std::string>());
    st.ground_rhs = s.value("ground_rhs", 0.0);
    st.ground_row = s.value("ground_row", -1);
    st.increasing_costs = s.value("increasing_costs", false);
    st.dt = s.value("dt", 1.0);
    if (s.contains("sets")) {
      for (const json& e : s.at("sets")) {
        SetCapacity sc;
        sc.members = e.at("members").get<std::vector<int>>();
        sc.lo = e.at("lo").get<double>();
        sc.hi = e.at("hi").get<double>();
        sc.row_lo = e.value("row_lo", -1);
        sc.row_hi = e.value("row_hi", -1);
        st.sets.push_back(std::move(sc));
      }
    }
  }
  if (j.contains("metadata")) {
    instance.metadata =
        j.at("metadata").get<std::map<std::string, std::string>>();
  }
  instance.validate();
  return instance;
}

json multipliers_to_json(const MultiplierVector& m) {
  return json{{"mu", m.mu}, {"lambda", m.lambda}};
}

MultiplierVector multipliers_from_json(const json& j) {
  MultiplierVector m;
  m.mu = j.at("mu").get<std::vector<double>>();
  m.lambda = j.at("lambda").get<std::vector<double>>();
  return m;
}

json offline_solution_to_json(const OfflineSolution& sol) {
  json j;
  j["x"] = sol.x;
  j["multipliers"] = multipliers_to_json(sol.multipliers);
  j["objective"] = sol.objective;
  j["kkt"] = {{"stationarity", sol.kkt.stationarity},
              {"primal", sol.kkt.primal},
              {"dual", sol.kkt.dual},
              {"complementarity", sol.kkt.complementarity},
              {"max_residual", sol.kkt.max_residual}};
  return j;
}

json online_trace_to_json(const OnlineTrace& trace) {
  json j;
  j["x"] = trace.x;
  j["objective"] = trace.objective;
  j["feasible"] = trace.feasibility.feasible;
  j["max_violation"] = trace.feasibility.max_violation;
  json stages = json::array();
  for (const StageDecision& dec : trace.stages) {
    json s;
    s["t"] = dec.t;
    s["x"] = dec.x;
    s["kind"] = dec.kind;
    if (dec.has_interval) {
      s["interval"] = {dec.interval.lo, dec.interval.hi};
    }
    s["cumulative_slack"] = dec.cumulative_slack;
    stages.push_back(std::move(s));
  }
  j["stages"] = std::move(stages);
  return j;
}

json multiplier_history_to_json(const MultiplierHistory& h) {
  json arr = json::array();
  for (const MultiplierVector& m : h.entries) {
    arr.push_back(multipliers_to_json(m));
  }
  return json{{"multipliers", std::move(arr)}};
}

MultiplierHistory multiplier_history_from_json(const json& j) {
  MultiplierHistory h;
  for (const json& e : j.at("multipliers")) {
    h.entries.push_back(multipliers_from_json(e));
  }
  return h;
}

json parameter_history_to_json(const ParameterHistory& h) {
  return json{{"parameters", h.entries}};
}

ParameterHistory parameter_history_from_json(const json& j) {
  ParameterHistory h;
  h.entries = j.at("parameters").get<std::vector<std::vector<double>>>();
  return h;
}

std::vector<CostFunction> read_cost_stream(std::istream& in) {
  std::vector<CostFunction> costs;
  std::string line;
  int expected = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError("cost stream line " + std::to_string(expected + 1) +
                        ": " + e.what());
    }
    const int t = j.at("t").get<int>();
    if (t != expected) {
      throw ConfigError("cost stream records out of order at stage " +
                        std::to_string(t + 1));
    }
    costs.push_back(cost_from_json(j.at("cost")));
    ++expected;
  }
  return costs;
}

void write_cost_stream(std::ostream& out,
                       const std::vector<CostFunction>& costs) {
  for (std::size_t t = 0; t < costs.size(); ++t) {
    json j;
    j["t"] = static_cast<int>(t);
    j["cost"] = cost_to_json(costs[t]);
    out << j.dump() << "\n";
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace oddo
