#pragma once

#include <map>
#include <string>
#include <vector>

#include "oddo/cost.hpp"

namespace oddo {

// Per-stage box constraint l <= x <= u (componentwise).
struct StageSet {
  std::vector<double> lower, upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const std::vector<double>& x, double tol) const;
  std::vector<double> clip(std::vector<double> x) const;
  void validate() const;

  static StageSet box(std::vector<double> l, std::vector<double> u);
  static StageSet box1d(double l, double u) { return box({l}, {u}); }
};

// One coupling row: sum_t dot(coeffs[t], x^t)  (<= or ==)  rhs.
// coeffs[t] is either empty (stage does not participate) or has the stage's
// full dimension.
struct LinearCoupling {
  std::vector<std::vector<double>> coeffs;
  double rhs = 0.0;

  double lhs(const std::vector<std::vector<double>>& x) const;
  // Contribution of stages < t_bar to the left-hand side.
  double prefix_lhs(const std::vector<std::vector<double>>& x, int t_bar) const;
  double coeff(int t, int i) const;
};

struct CouplingConstraints {
  std::vector<LinearCoupling> inequalities;  // lhs <= rhs
  std::vector<LinearCoupling> equalities;    // lhs == rhs
};

// Structural metadata attached by generators/embeddings.  The offline solver
// and the online projection pick specialised routines from it; General means
// "no structure known".
//
// For Rap/Laminar/BatteryChain kinds the coupling rows are generated from a
// ground-set resource equality (sum over all stages == ground_rhs) plus, for
// each proper stage subset in `sets`, a capacity interval on the subset sum.
// All three use unit coefficients on scalar stages.
enum class StructureKind { General, Rap, Laminar, BatteryChain };

struct SetCapacity {
  std::vector<int> members;  // stage indices, 0-based, sorted
  double lo = 0.0;           // -inf (== -kNoBound) when only an upper cap
  double hi = 0.0;
  int row_lo = -1;  // index into coupling.inequalities holding -sum <= -lo
  int row_hi = -1;  // index into coupling.inequalities holding  sum <=  hi
};

inline constexpr double kNoBound = 1e300;

struct InstanceStructure {
  StructureKind kind = StructureKind::General;
  double ground_rhs = 0.0;
  int ground_row = -1;  // index into coupling.equalities
  std::vector<SetCapacity> sets;
  // Set by generators when every stage cost is increasing on its box, the
  // premise of the under-prediction regret bound.
  bool increasing_costs = false;
  // BatteryChain only: time step scaling cumulative power into energy.
  double dt = 1.0;
};

std::string to_string(StructureKind kind);

// Constraint side of an instance: everything the online engine may see
// before costs are revealed.
struct InstanceConstraints {
  int T = 0;
  std::vector<StageSet> stages;
  CouplingConstraints coupling;
  InstanceStructure structure;

  int dimension(int t) const { return stages[t].dimension(); }
  int total_dimension() const;
  bool scalar_stages() const;  // all stages one-dimensional
  void validate() const;
};

struct ProblemInstance {
  InstanceConstraints constraints;
  std::vector<CostFunction> costs;  // one per stage
  std::map<std::string, std::string> metadata;

  int T() const { return constraints.T; }
  void validate() const;
};

// Dual variables: mu (>= 0) indexed by inequality rows, lambda (free) by
// equality rows.
struct MultiplierVector {
  std::vector<double> mu;
  std::vector<double> lambda;

  int dimension() const { return static_cast<int>(mu.size() + lambda.size()); }
  void validate(double tol = 0.0) const;
  static MultiplierVector zeros(const InstanceConstraints& c);
};

struct FeasibilityReport {
  bool feasible = true;
  double max_violation = 0.0;
  std::string worst;  // description of the worst violated constraint
};

double evaluate_objective(const ProblemInstance& instance,
                          const std::vector<std::vector<double>>& x);

FeasibilityReport check_feasibility(const InstanceConstraints& constraints,
                                    const std::vector<std::vector<double>>& x,
                                    double tol);

}  // namespace oddo
