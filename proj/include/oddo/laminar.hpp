#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oddo/model.hpp"

namespace oddo {

// A laminar resource family over stages {1..T}: per-stage upper capacities
// (the singleton values r({t}), which become the box uppers), a list of
// proper subsets with their capacities (these become one inequality row
// each), and the ground-set value r({1..T}) (the resource equality).
//
// Any two listed sets must be nested or disjoint.  The induced set function
//   r_hat(X) = min over partitions of X into family sets of the summed
//              effective capacities
// is submodular, and the embedding below turns the family into an instance
// of the general stage-coupled problem.
struct LaminarSet {
  std::vector<int> members;  // 0-based stage indices, sorted, size 1..T-1
  double capacity = 0.0;
};

struct LaminarFamily {
  int T = 0;
  std::vector<double> stage_upper;  // r({t}) for every stage
  std::vector<LaminarSet> sets;     // proper subsets materialized as rows
  double ground = 0.0;              // r({1..T})

  void validate() const;  // throws ConfigError on malformed/non-laminar input
};

bool is_laminar(const std::vector<LaminarSet>& sets, int T);

// Effective capacity of every family node after tightening by descendants:
// cap*(X) = min(c(X), sum of cap* over the maximal family sets strictly
// inside X).  Singletons seed the recursion with the stage uppers.
// induced_value(family, X) evaluates r_hat on an arbitrary subset by greedy
// decomposition into maximal family sets.
double induced_value(const LaminarFamily& family, const std::vector<int>& X);

// Brute-force submodularity check of a set-function oracle over all subset
// pairs of {1..T} (4^T pairs; practical for T <= 12).  The oracle receives a
// bitmask over stages.  Also requires r(empty) = 0.
bool submodularity_check(int T, const std::function<double(uint64_t)>& r,
                         double tol = 1e-9);

// Materializes the family as a ProblemInstance: stage boxes
// [r_hat(T) - r_hat(T\{t}), r({t})], one inequality per listed proper set,
// one equality for the ground set, unit coefficients throughout.  The
// structure descriptor is filled so the specialised offline solver and the
// online projection recognise the instance.
ProblemInstance embed_laminar(const LaminarFamily& family,
                              std::vector<CostFunction> costs);
InstanceConstraints embed_laminar_constraints(const LaminarFamily& family);

// The greedy base-polyhedron vertex x_t = r_hat({1..t}) - r_hat({1..t-1});
// always feasible for the embedded instance (used as a self-check).
std::vector<std::vector<double>> greedy_vertex(const LaminarFamily& family);

}  // namespace oddo
