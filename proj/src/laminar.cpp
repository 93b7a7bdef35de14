#include "oddo/laminar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oddo/errors.hpp"

namespace oddo {

namespace {

bool is_sorted_unique(const std::vector<int>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] >= v[i]) return false;
  return true;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return true;
}

// Effective capacities cap*(X) = min(c(X), sum of cap* over the maximal
// family sets strictly inside X), with singletons seeded from stage_upper.
// Returns one value per listed set, in listing order.
std::vector<double> effective_capacities(const LaminarFamily& family) {
  const size_t n = family.sets.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return family.sets[a].members.size() < family.sets[b].members.size();
  });

  std::vector<double> cap(n, 0.0);
  for (size_t pos = 0; pos < n; ++pos) {
    const size_t idx = order[pos];
    const auto& X = family.sets[idx].members;
    // Maximal listed sets strictly inside X, found among already-processed
    // (smaller) sets; laminarity makes "maximal and pairwise disjoint"
    // coincide, so a greedy scan from larger to smaller works.
    std::vector<char> covered(X.size(), 0);
    double children_sum = 0.0;
    for (size_t q = pos; q-- > 0;) {
      const size_t cidx = order[q];
      const auto& S = family.sets[cidx].members;
      if (S.size() >= X.size() || !subset_of(S, X)) continue;
      bool overlaps_taken = false;
      for (size_t xi = 0; xi < X.size() && !overlaps_taken; ++xi)
        if (covered[xi] && std::binary_search(S.begin(), S.end(), X[xi]))
          overlaps_taken = true;
      if (overlaps_taken) continue;
      children_sum += cap[cidx];
      for (size_t xi = 0; xi < X.size(); ++xi)
        if (std::binary_search(S.begin(), S.end(), X[xi])) covered[xi] = 1;
    }
    for (size_t xi = 0; xi < X.size(); ++xi)
      if (!covered[xi]) children_sum += family.stage_upper[X[xi]];
    cap[idx] = std::min(family.sets[idx].capacity, children_sum);
  }
  return cap;
}

double cover_value(const LaminarFamily& family, const std::vector<double>& cap,
                   const std::vector<int>& X) {
  std::vector<size_t> order(family.sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return family.sets[a].members.size() > family.sets[b].members.size();
  });
  std::vector<char> covered(X.size(), 0);
  double total = 0.0;
  for (size_t idx : order) {
    const auto& S = family.sets[idx].members;
    if (S.size() > X.size() || !subset_of(S, X)) continue;
    bool overlaps_taken = false;
    for (size_t xi = 0; xi < X.size() && !overlaps_taken; ++xi)
      if (covered[xi] && std::binary_search(S.begin(), S.end(), X[xi]))
        overlaps_taken = true;
    if (overlaps_taken) continue;
    total += cap[idx];
    for (size_t xi = 0; xi < X.size(); ++xi)
      if (std::binary_search(S.begin(), S.end(), X[xi])) covered[xi] = 1;
  }
  for (size_t xi = 0; xi < X.size(); ++xi)
    if (!covered[xi]) total += family.stage_upper[X[xi]];
  return total;
}

}  // namespace

bool is_laminar(const std::vector<LaminarSet>& sets, int /*T*/) {
  for (size_t i = 0; i < sets.size(); ++i)
    for (size_t j = i + 1; j < sets.size(); ++j) {
      const auto& A = sets[i].members;
      const auto& B = sets[j].members;
      if (!disjoint(A, B) && !subset_of(A, B) && !subset_of(B, A)) return false;
    }
  return true;
}

void LaminarFamily::validate() const {
  if (T <= 0) throw ConfigError("laminar family needs T >= 1");
  if (static_cast<int>(stage_upper.size()) != T)
    throw ConfigError("laminar family needs one stage upper bound per stage");
  for (const auto& s : sets) {
    if (s.members.empty() || static_cast<int>(s.members.size()) >= T)
      throw ConfigError("laminar family sets must be proper nonempty subsets");
    if (!is_sorted_unique(s.members) || s.members.front() < 0 ||
        s.members.back() >= T)
      throw ConfigError("laminar family set members must be sorted stage "
                        "indices in range");
    if (!std::isfinite(s.capacity))
      throw ConfigError("laminar family set capacity must be finite");
  }
  for (size_t i = 0; i < sets.size(); ++i)
    for (size_t j = i + 1; j < sets.size(); ++j)
      if (sets[i].members == sets[j].members)
        throw ConfigError("laminar family lists a set twice");
  if (!is_laminar(sets, T))
    throw ConfigError("family is not laminar: two sets cross");
}

double induced_value(const LaminarFamily& family, const std::vector<int>& X) {
  if (!is_sorted_unique(X) ||
      (!X.empty() && (X.front() < 0 || X.back() >= family.T)))
    throw ConfigError("induced_value needs a sorted in-range subset");
  const std::vector<double> cap = effective_capacities(family);
  const double partition = cover_value(family, cap, X);
  if (static_cast<int>(X.size()) == family.T)
    return std::min(family.ground, partition);
  return partition;
}

bool submodularity_check(int T, const std::function<double(uint64_t)>& r,
                         double tol) {
  if (T < 1 || T > 12)
    throw ConfigError("submodularity_check enumerates 4^T pairs; needs T in "
                      "[1, 12]");
  const uint64_t n = uint64_t{1} << T;
  std::vector<double> table(n);
  for (uint64_t mask = 0; mask < n; ++mask) table[mask] = r(mask);
  if (std::abs(table[0]) > tol) return false;
  for (uint64_t X = 0; X < n; ++X)
    for (uint64_t Y = X; Y < n; ++Y)
      if (table[X | Y] + table[X & Y] > table[X] + table[Y] + tol)
        return false;
  return true;
}

InstanceConstraints embed_laminar_constraints(const LaminarFamily& family) {
  family.validate();
  const std::vector<double> cap = effective_capacities(family);

  std::vector<int> all(family.T);
  std::iota(all.begin(), all.end(), 0);
  const double top = cover_value(family, cap, all);
  if (family.ground > top + 1e-9)
    throw InfeasibleError("ground-set value exceeds the family's effective "
                          "capacity: no feasible point");

  InstanceConstraints c;
  c.T = family.T;
  c.stages.reserve(family.T);
  for (int t = 0; t < family.T; ++t) {
    std::vector<int> rest;
    rest.reserve(family.T - 1);
    for (int s = 0; s < family.T; ++s)
      if (s != t) rest.push_back(s);
    const double lo =
        std::min(family.ground, top) - cover_value(family, cap, rest);
    c.stages.push_back(StageSet::box1d(std::min(lo, family.stage_upper[t]),
                                       family.stage_upper[t]));
  }

  c.structure.kind =
      family.sets.empty() ? StructureKind::Rap : StructureKind::Laminar;
  c.structure.ground_rhs = family.ground;
  for (const auto& s : family.sets) {
    LinearCoupling row;
    row.coeffs.assign(family.T, {});
    for (int t : s.members) row.coeffs[t] = {1.0};
    row.rhs = s.capacity;
    SetCapacity sc;
    sc.members = s.members;
    sc.lo = -kNoBound;
    sc.hi = s.capacity;
    sc.row_hi = static_cast<int>(c.coupling.inequalities.size());
    c.coupling.inequalities.push_back(std::move(row));
    c.structure.sets.push_back(std::move(sc));
  }
  LinearCoupling ground_row;
  ground_row.coeffs.assign(family.T, std::vector<double>{1.0});
  ground_row.rhs = family.ground;
  c.structure.ground_row = 0;
  c.coupling.equalities.push_back(std::move(ground_row));
  c.validate();
  return c;
}

ProblemInstance embed_laminar(const LaminarFamily& family,
                              std::vector<CostFunction> costs) {
  if (costs.empty()) throw ConfigError("embed_laminar needs costs");
  ProblemInstance instance;
  instance.constraints = embed_laminar_constraints(family);
  if (static_cast<int>(costs.size()) != family.T)
    throw ConfigError("embed_laminar needs one cost per stage");
  instance.costs = std::move(costs);
  instance.validate();

  // Flag the under-prediction bound premise when every cost is strictly
  // convex and increasing over its box (gradient >= 0 at the lower corner).
  bool increasing = true;
  for (int t = 0; t < family.T && increasing; ++t) {
    const auto& f = instance.costs[t];
    if (!f.strictly_convex()) {
      increasing = false;
      break;
    }
    try {
      increasing = f.scalar_gradient(instance.constraints.stages[t].lower[0]) >=
                   -1e-12;
    } catch (const DomainError&) {
      increasing = false;
    }
  }
  instance.constraints.structure.increasing_costs = increasing;
  return instance;
}

std::vector<std::vector<double>> greedy_vertex(const LaminarFamily& family) {
  family.validate();
  std::vector<std::vector<double>> x(family.T);
  std::vector<int> prefix;
  double prev = 0.0;
  for (int t = 0; t < family.T; ++t) {
    prefix.push_back(t);
    const double cur = induced_value(family, prefix);
    x[t] = {cur - prev};
    prev = cur;
  }
  return x;
}

}  // namespace oddo
