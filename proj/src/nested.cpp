#include "oddo/nested.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "oddo/errors.hpp"
#include "oddo/model.hpp"
#include "oddo/offline.hpp"

namespace oddo {

namespace {

bool has_lower(double b) { return b > -kNoBound / 2; }
bool has_upper(double b) { return b < kNoBound / 2; }

// One node of the laminar tree.  Leaves are stages; interior nodes are
// capacity sets clipping the total of their children; node 0 is a virtual
// root holding the top-level sets and the uncovered stages.
//
// Everything rests on the node's "supply curve": the total it delivers when
// its surroundings run at marginal price nu.  A stage supplies the box-
// clipped gradient inverse, a set clips the sum of its children's supplies
// into its capacity interval, so every curve is continuous and nondecreasing
// in nu and the whole problem collapses to scalar root-finding.
struct TreeNode {
  int set_id = -1;  // index into structure.sets; -1 for root and leaves
  int stage = -1;   // stage index for leaves; -1 otherwise
  double lo = -kNoBound;
  double hi = kNoBound;
  std::vector<int> children;

  // Filled during recovery.
  double total = 0.0;
  double nu_in = 0.0;   // marginal at which the node splits its total
  double nu_out = 0.0;  // marginal of the enclosing region
  int clip_side = 0;    // +1 pinned at hi, -1 at lo, 0 interior
};

}  // namespace

OfflineSolution solve_nested_rap(const ProblemInstance& instance) {
  const InstanceConstraints& con = instance.constraints;
  const InstanceStructure& st = con.structure;
  if (st.kind == StructureKind::General) {
    throw SolverError(
        "nested RAP solver needs a laminar/chain structure annotation");
  }
  if (!con.scalar_stages()) {
    throw SolverError("nested RAP solver handles scalar stages only");
  }
  for (const CostFunction& f : instance.costs) {
    if (!f.strictly_convex() || !f.has_inverse_gradient()) {
      throw SolverError(
          "nested RAP solver needs strictly convex costs with an invertible "
          "gradient");
    }
  }

  const int T = con.T;
  std::vector<double> lo_box(static_cast<std::size_t>(T));
  std::vector<double> hi_box(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    lo_box[static_cast<std::size_t>(t)] = con.stages[t].lower[0];
    hi_box[static_cast<std::size_t>(t)] = con.stages[t].upper[0];
    if (!(lo_box[static_cast<std::size_t>(t)] <=
          hi_box[static_cast<std::size_t>(t)])) {
      throw InfeasibleError("stage box with lower bound above upper bound");
    }
  }

  // Deterministic set order: smaller sets first, ties by members then by
  // original index, so duplicated supports chain up in listing order.
  const std::size_t S = st.sets.size();
  std::vector<std::size_t> order(S);
  for (std::size_t s = 0; s < S; ++s) order[s] = s;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ma = st.sets[a].members;
    const auto& mb = st.sets[b].members;
    if (ma.size() != mb.size()) return ma.size() < mb.size();
    if (ma != mb) return ma < mb;
    return a < b;
  });

  std::vector<TreeNode> nodes(1);  // virtual root
  std::vector<int> set_node(S, -1);

  auto contains = [&](const std::vector<int>& big,
                      const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  for (std::size_t k = 0; k < S; ++k) {
    const std::size_t s = order[k];
    const SetCapacity& sc = st.sets[s];
    if (sc.members.empty()) {
      throw ConfigError("capacity set with no members");
    }
    TreeNode node;
    node.set_id = static_cast<int>(s);
    node.lo = sc.lo;
    node.hi = sc.hi;
    nodes.push_back(node);
    set_node[s] = static_cast<int>(nodes.size()) - 1;
  }
  for (std::size_t k = 0; k < S; ++k) {
    const std::size_t s = order[k];
    const auto& ms = st.sets[s].members;
    // Parent: the smallest strict superset, or -- for duplicated supports --
    // the nearest earlier duplicate, so equal sets chain instead of
    // colliding.
    int parent = 0;
    std::size_t parent_size = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < S; ++j) {
      if (j == k) continue;
      const std::size_t other = order[j];
      const auto& mo = st.sets[other].members;
      if (mo.size() < ms.size()) continue;
      if (mo.size() == ms.size() && !(mo == ms && j < k)) continue;
      if (!contains(mo, ms)) continue;
      if (mo.size() < parent_size ||
          (mo.size() == parent_size && mo == ms)) {
        parent_size = mo.size();
        parent = set_node[other];
      }
    }
    nodes[static_cast<std::size_t>(parent)].children.push_back(set_node[s]);
  }

  // Stage leaves hang off the smallest set containing them (the deepest of
  // an equal-support chain, hence <= on the tie).
  for (int t = 0; t < T; ++t) {
    int parent = 0;
    std::size_t parent_size = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < S; ++k) {
      const std::size_t s = order[k];
      const auto& ms = st.sets[s].members;
      if (!std::binary_search(ms.begin(), ms.end(), t)) continue;
      if (ms.size() <= parent_size) {
        parent_size = ms.size();
        parent = set_node[s];
      }
    }
    TreeNode leaf;
    leaf.stage = t;
    nodes.push_back(leaf);
    nodes[static_cast<std::size_t>(parent)].children.push_back(
        static_cast<int>(nodes.size()) - 1);
  }
  for (std::size_t n = 1; n < nodes.size(); ++n) {
    if (nodes[n].stage < 0 && nodes[n].children.empty()) {
      // A set whose stages all belong to smaller duplicates of it: members
      // equal, so the chain above already carries them.  Give it the
      // duplicate as a child would have; an empty interior cannot happen for
      // validated laminar families except through exact-duplicate supports,
      // which the parent scan chains.  Reaching here means the family was
      // inconsistent after all.
      throw SolverError("laminar capacity set has no interior stages");
    }
  }

  // Stage gradients at the box corners; outside that range a stage is
  // saturated and the gradient inverse (whose domain may end there) is never
  // consulted.
  std::vector<double> grad_lo(static_cast<std::size_t>(T));
  std::vector<double> grad_hi(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const std::size_t u = static_cast<std::size_t>(t);
    grad_lo[u] = instance.costs[u].scalar_gradient(lo_box[u]);
    grad_hi[u] = instance.costs[u].scalar_gradient(hi_box[u]);
  }

  // Clipped supply of a node at marginal nu.
  auto supply = [&](auto&& self, int id, double nu) -> double {
    const TreeNode& node = nodes[static_cast<std::size_t>(id)];
    if (node.stage >= 0) {
      const std::size_t t = static_cast<std::size_t>(node.stage);
      if (nu <= grad_lo[t]) return lo_box[t];
      if (nu >= grad_hi[t]) return hi_box[t];
      return std::clamp(instance.costs[t].inverse_gradient(nu), lo_box[t],
                        hi_box[t]);
    }
    double s = 0.0;
    for (int c : node.children) s += self(self, c, nu);
    if (has_lower(node.lo)) s = std::max(s, node.lo);
    if (has_upper(node.hi)) s = std::min(s, node.hi);
    return s;
  };
  // Unclipped child total of a node at marginal nu.
  auto raw_supply = [&](int id, double nu) -> double {
    const TreeNode& node = nodes[static_cast<std::size_t>(id)];
    double s = 0.0;
    for (int c : node.children) s += supply(supply, c, nu);
    return s;
  };

  // Global marginal bracket from the box corners (same corners solve_rap
  // uses): every curve saturates outside it.
  double nu_min = std::numeric_limits<double>::infinity();
  double nu_max = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < T; ++t) {
    const std::size_t u = static_cast<std::size_t>(t);
    nu_min = std::min(nu_min, grad_lo[u]);
    nu_max = std::max(nu_max, grad_hi[u]);
  }

  // Solve sum-of-children(nu) = target for a node, to marginal machine
  // precision (the primal tolerance matters less than returning a marginal
  // whose residual can be dumped into an interior child).
  auto solve_marginal = [&](int id, double target) -> double {
    double lo = nu_min, hi = nu_max;
    double step = std::max(1.0, hi - lo);
    for (int k = 0; k < 64 && raw_supply(id, lo) > target; ++k, step *= 2.0)
      lo -= step;
    step = std::max(1.0, hi - lo);
    for (int k = 0; k < 64 && raw_supply(id, hi) < target; ++k, step *= 2.0)
      hi += step;
    if (raw_supply(id, lo) > target || raw_supply(id, hi) < target) {
      throw SolverError("nested RAP could not bracket a region marginal");
    }
    double nu = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      nu = 0.5 * (lo + hi);
      const double s = raw_supply(id, nu);
      if (s == target) break;
      if (s < target)
        lo = nu;
      else
        hi = nu;
      if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi)))
        break;
    }
    return nu;
  };

  // Feasibility of the ground total against the induced reachable interval.
  const double reach_lo = supply(supply, 0, nu_min - 1.0);
  const double reach_hi = supply(supply, 0, nu_max + 1.0);
  double ground = st.ground_rhs;
  const double feas_tol =
      1e-9 * std::max({1.0, std::abs(reach_lo), std::abs(reach_hi)});
  if (ground < reach_lo - feas_tol || ground > reach_hi + feas_tol) {
    throw InfeasibleError(
        "ground resource total " + std::to_string(ground) +
        " lies outside the reachable interval [" + std::to_string(reach_lo) +
        ", " + std::to_string(reach_hi) + "]");
  }
  ground = std::clamp(ground, reach_lo, reach_hi);

  std::vector<double> x_flat(static_cast<std::size_t>(T), 0.0);

  // Split a node's committed total among its children at the node's own
  // marginal, dump the bisection residual into children that still have
  // slack, then recurse.
  auto recover = [&](auto&& self, int id, double target, double ambient)
      -> void {
    TreeNode& node = nodes[static_cast<std::size_t>(id)];
    node.total = target;
    node.nu_out = ambient;
    if (node.stage >= 0) {
      x_flat[static_cast<std::size_t>(node.stage)] = target;
      node.nu_in = ambient;
      return;
    }

    double nu = ambient;
    int side = 0;
    if (raw_supply(id, ambient) != target) {
      nu = solve_marginal(id, target);
      const bool at_hi = has_upper(node.hi) && target == node.hi;
      const bool at_lo = has_lower(node.lo) && target == node.lo;
      if (at_hi && at_lo) {
        side = ambient >= nu ? +1 : -1;  // pinched interval: charge by gap sign
      } else if (at_hi) {
        side = +1;
      } else if (at_lo) {
        side = -1;
      }
    }
    node.nu_in = nu;
    node.clip_side = side;

    std::vector<double> part;
    part.reserve(node.children.size());
    double assigned = 0.0;
    for (int c : node.children) {
      part.push_back(supply(supply, c, nu));
      assigned += part.back();
    }
    double resid = target - assigned;
    // Headroom of child c for absorbing resid without leaving its own clip
    // interval (box interval for leaves).  A set child sitting exactly on a
    // clip bound must stay there -- nudging it off would detach its charged
    // multiplier from the tight row -- while a leaf can absorb a nudge
    // anywhere in its box (the box multiplier soaks up the epsilon).
    auto headroom = [&](std::size_t k) {
      const TreeNode& ch = nodes[static_cast<std::size_t>(node.children[k])];
      const double lo =
          ch.stage >= 0 ? lo_box[static_cast<std::size_t>(ch.stage)] : ch.lo;
      const double hi =
          ch.stage >= 0 ? hi_box[static_cast<std::size_t>(ch.stage)] : ch.hi;
      if (ch.stage < 0 && ((has_upper(hi) && part[k] == hi) ||
                           (has_lower(lo) && part[k] == lo))) {
        return 0.0;
      }
      if (resid > 0.0) return has_upper(hi) ? hi - part[k] : kNoBound;
      return has_lower(lo) ? part[k] - lo : kNoBound;
    };
    for (int round = 0;
         round < 4 && std::abs(resid) >
             std::numeric_limits<double>::min() * node.children.size();
         ++round) {
      std::size_t pick = 0;
      double best = -1.0;
      for (std::size_t k = 0; k < node.children.size(); ++k) {
        const double h = headroom(k);
        if (h > best) {
          best = h;
          pick = k;
        }
      }
      if (best <= 0.0) break;
      const double shift =
          std::clamp(resid, resid > 0.0 ? 0.0 : -best, resid > 0.0 ? best : 0.0);
      part[pick] += shift;
      resid -= shift;
    }

    for (std::size_t k = 0; k < node.children.size(); ++k) {
      self(self, node.children[k], part[k], nu);
    }
  };

  const double nu_root = solve_marginal(0, ground);
  recover(recover, 0, ground, nu_root);

  // The ground multiplier is minus the root marginal (stationarity is
  // grad f + mu^T A + lambda = 0 with unit rows); each set multiplier is the
  // marginal gap across its clip, nonnegative by curve monotonicity.
  MultiplierVector m = MultiplierVector::zeros(con);
  if (st.ground_row < 0 ||
      st.ground_row >= static_cast<int>(con.coupling.equalities.size())) {
    throw SolverError("structure annotation lacks a ground equality row");
  }
  m.lambda[static_cast<std::size_t>(st.ground_row)] = -nu_root;
  for (std::size_t n = 1; n < nodes.size(); ++n) {
    const TreeNode& node = nodes[n];
    if (node.set_id < 0 || node.clip_side == 0) continue;
    double val = node.clip_side * (node.nu_out - node.nu_in);
    if (val < -1e-7 * std::max(1.0, std::abs(node.nu_in))) {
      throw SolverError(
          "nested RAP produced a negative set multiplier (value " +
          std::to_string(val) + ", pinned side " +
          std::to_string(node.clip_side) + ", inner marginal " +
          std::to_string(node.nu_in) + ", outer marginal " +
          std::to_string(node.nu_out) + ")");
    }
    val = std::max(val, 0.0);
    const SetCapacity& sc = st.sets[static_cast<std::size_t>(node.set_id)];
    const int row = node.clip_side > 0 ? sc.row_hi : sc.row_lo;
    if (row < 0 || row >= static_cast<int>(con.coupling.inequalities.size())) {
      throw SolverError("pinned capacity has no inequality row to charge");
    }
    m.mu[static_cast<std::size_t>(row)] += val;
  }

  OfflineSolution sol;
  sol.x.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    sol.x[static_cast<std::size_t>(t)] = {x_flat[static_cast<std::size_t>(t)]};
  }
  sol.multipliers = std::move(m);
  sol.objective = evaluate_objective(instance, sol.x);
  sol.kkt = kkt_residuals(instance, sol.x, sol.multipliers);
  if (sol.kkt.max_residual > 1e-6) {
    throw SolverError(
        "nested RAP solution failed its optimality certificate "
        "(stationarity " + std::to_string(sol.kkt.stationarity) +
        ", primal " + std::to_string(sol.kkt.primal) + ", dual " +
        std::to_string(sol.kkt.dual) + ", complementarity " +
        std::to_string(sol.kkt.complementarity) + ")");
  }
  return sol;
}

}  // namespace oddo
