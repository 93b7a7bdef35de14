#include "oddo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oddo/errors.hpp"

namespace oddo {

bool StageSet::contains(const std::vector<double>& x, double tol) const {
  if (x.size() != lower.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

std::vector<double> StageSet::clip(std::vector<double> x) const {
  for (size_t i = 0; i < x.size(); ++i)
    x[i] = std::clamp(x[i], lower[i], upper[i]);
  return x;
}

void StageSet::validate() const {
  if (lower.size() != upper.size())
    throw ConfigError("stage box has mismatched bound sizes");
  if (lower.empty()) throw ConfigError("stage box is zero-dimensional");
  for (size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw ConfigError("stage box has lower > upper");
}

StageSet StageSet::box(std::vector<double> l, std::vector<double> u) {
  StageSet s;
  s.lower = std::move(l);
  s.upper = std::move(u);
  return s;
}

double LinearCoupling::lhs(const std::vector<std::vector<double>>& x) const {
  double s = 0.0;
  const size_t n = std::min(coeffs.size(), x.size());
  for (size_t t = 0; t < n; ++t) {
    const auto& a = coeffs[t];
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[t][i];
  }
  return s;
}

double LinearCoupling::prefix_lhs(const std::vector<std::vector<double>>& x,
                                  int t_bar) const {
  double s = 0.0;
  const int n = std::min<int>(t_bar, static_cast<int>(coeffs.size()));
  for (int t = 0; t < n; ++t) {
    const auto& a = coeffs[t];
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[t][i];
  }
  return s;
}

double LinearCoupling::coeff(int t, int i) const {
  if (t < 0 || t >= static_cast<int>(coeffs.size())) return 0.0;
  const auto& a = coeffs[t];
  if (i < 0 || i >= static_cast<int>(a.size())) return 0.0;
  return a[i];
}

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::General:
      return "general";
    case StructureKind::Rap:
      return "rap";
    case StructureKind::Laminar:
      return "laminar";
    case StructureKind::BatteryChain:
      return "battery_chain";
  }
  return "?";
}

int InstanceConstraints::total_dimension() const {
  int n = 0;
  for (const auto& s : stages) n += s.dimension();
  return n;
}

bool InstanceConstraints::scalar_stages() const {
  return std::all_of(stages.begin(), stages.end(),
                     [](const StageSet& s) { return s.dimension() == 1; });
}

void InstanceConstraints::validate() const {
  if (T <= 0) throw ConfigError("instance needs T >= 1");
  if (static_cast<int>(stages.size()) != T)
    throw ConfigError("stage count does not match T");
  for (const auto& s : stages) s.validate();
  auto check_row = [&](const LinearCoupling& row, const char* what) {
    if (static_cast<int>(row.coeffs.size()) > T)
      throw ConfigError(std::string(what) + " row spans more stages than T");
    for (size_t t = 0; t < row.coeffs.size(); ++t) {
      if (!row.coeffs[t].empty() &&
          static_cast<int>(row.coeffs[t].size()) != stages[t].dimension())
        throw ConfigError(std::string(what) +
                          " row has wrong per-stage dimension");
    }
    if (!std::isfinite(row.rhs))
      throw ConfigError(std::string(what) + " row has non-finite rhs");
  };
  for (const auto& row : coupling.inequalities) check_row(row, "inequality");
  for (const auto& row : coupling.equalities) check_row(row, "equality");
}

void ProblemInstance::validate() const {
  constraints.validate();
  if (static_cast<int>(costs.size()) != constraints.T)
    throw ConfigError("cost count does not match T");
  for (int t = 0; t < constraints.T; ++t) {
    costs[t].validate();
    if (costs[t].dimension() != constraints.dimension(t))
      throw ConfigError("cost dimension does not match stage box at stage " +
                        std::to_string(t + 1));
  }
}

void MultiplierVector::validate(double tol) const {
  for (double m : mu)
    if (m < -tol)
      throw ConfigError("inequality multiplier is negative: " +
                        std::to_string(m));
}

MultiplierVector MultiplierVector::zeros(const InstanceConstraints& c) {
  MultiplierVector m;
  m.mu.assign(c.coupling.inequalities.size(), 0.0);
  m.lambda.assign(c.coupling.equalities.size(), 0.0);
  return m;
}

double evaluate_objective(const ProblemInstance& instance,
                          const std::vector<std::vector<double>>& x) {
  if (x.size() != instance.costs.size())
    throw ConfigError("objective evaluated at wrong stage count");
  double s = 0.0;
  for (size_t t = 0; t < x.size(); ++t) s += instance.costs[t].value(x[t]);
  return s;
}

FeasibilityReport check_feasibility(const InstanceConstraints& constraints,
                                    const std::vector<std::vector<double>>& x,
                                    double tol) {
  FeasibilityReport report;
  auto record = [&](double violation, std::string what) {
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.worst = std::move(what);
    }
    if (violation > tol) report.feasible = false;
  };

  if (static_cast<int>(x.size()) != constraints.T) {
    report.feasible = false;
    report.worst = "wrong stage count";
    report.max_violation = kNoBound;
    return report;
  }
  for (int t = 0; t < constraints.T; ++t) {
    const auto& box = constraints.stages[t];
    if (static_cast<int>(x[t].size()) != box.dimension()) {
      report.feasible = false;
      report.worst = "wrong dimension at stage " + std::to_string(t + 1);
      report.max_violation = kNoBound;
      return report;
    }
    for (int i = 0; i < box.dimension(); ++i) {
      record(box.lower[i] - x[t][i],
             "stage " + std::to_string(t + 1) + " lower bound");
      record(x[t][i] - box.upper[i],
             "stage " + std::to_string(t + 1) + " upper bound");
    }
  }
  const auto& cp = constraints.coupling;
  for (size_t j = 0; j < cp.inequalities.size(); ++j)
    record(cp.inequalities[j].lhs(x) - cp.inequalities[j].rhs,
           "inequality " + std::to_string(j + 1));
  for (size_t k = 0; k < cp.equalities.size(); ++k)
    record(std::abs(cp.equalities[k].lhs(x) - cp.equalities[k].rhs),
           "equality " + std::to_string(k + 1));
  return report;
}

}  // namespace oddo
