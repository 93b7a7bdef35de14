#include "oddo/offline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "oddo/errors.hpp"
#include "oddo/lagrangian.hpp"
#include "oddo/nested.hpp"
#include "oddo/simplex.hpp"

namespace oddo {

namespace {

double rel(double resid, double scale) {
  return std::abs(resid) / std::max(1.0, scale);
}

bool bounded(double b) { return std::abs(b) < kNoBound / 2; }

}  // namespace

KktReport kkt_residuals(const ProblemInstance& instance,
                        const std::vector<std::vector<double>>& x,
                        const MultiplierVector& m, double activity_tol) {
  const InstanceConstraints& con = instance.constraints;
  if (static_cast<int>(x.size()) != con.T) {
    throw ConfigError("KKT check: decision vector has wrong stage count");
  }
  std::vector<std::vector<double>> d = dual_linear_terms(con, m);

  KktReport rep;
  for (int t = 0; t < con.T; ++t) {
    const StageSet& box = con.stages[static_cast<std::size_t>(t)];
    const std::vector<double>& xt = x[static_cast<std::size_t>(t)];
    if (static_cast<int>(xt.size()) != box.dimension()) {
      throw ConfigError("KKT check: stage vector has wrong dimension");
    }
    std::vector<double> grad =
        instance.costs[static_cast<std::size_t>(t)].gradient(xt);
    for (int i = 0; i < box.dimension(); ++i) {
      const double lb = box.lower[static_cast<std::size_t>(i)];
      const double ub = box.upper[static_cast<std::size_t>(i)];
      const double xv = xt[static_cast<std::size_t>(i)];
      const double g = grad[static_cast<std::size_t>(i)] +
                       d[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      const bool at_lo =
          bounded(lb) && xv - lb <= activity_tol * std::max(1.0, std::abs(lb));
      const bool at_hi =
          bounded(ub) && ub - xv <= activity_tol * std::max(1.0, std::abs(ub));
      double resid;
      if (at_lo && at_hi) {
        resid = 0.0;  // pinched coordinate, any gradient sign is fine
      } else if (at_lo) {
        resid = std::max(0.0, -g);  // pushing below the lower bound is free
      } else if (at_hi) {
        resid = std::max(0.0, g);
      } else {
        resid = std::abs(g);
      }
      const double scale =
          std::max(std::abs(grad[static_cast<std::size_t>(i)]),
                   std::abs(d[static_cast<std::size_t>(t)]
                             [static_cast<std::size_t>(i)]));
      rep.stationarity = std::max(rep.stationarity, rel(resid, scale));
      if (bounded(lb)) {
        rep.primal = std::max(rep.primal, rel(std::max(0.0, lb - xv), std::abs(lb)));
      }
      if (bounded(ub)) {
        rep.primal = std::max(rep.primal, rel(std::max(0.0, xv - ub), std::abs(ub)));
      }
    }
  }

  const CouplingConstraints& cc = con.coupling;
  for (std::size_t j = 0; j < cc.inequalities.size(); ++j) {
    const double lhs = cc.inequalities[j].lhs(x);
    const double rhs = cc.inequalities[j].rhs;
    const double mu = m.mu[j];
    rep.primal = std::max(rep.primal, rel(std::max(0.0, lhs - rhs), std::abs(rhs)));
    rep.dual = std::max(rep.dual, std::max(0.0, -mu));
    const double slack = std::max(0.0, rhs - lhs);
    rep.complementarity =
        std::max(rep.complementarity,
                 std::abs(mu) * slack /
                     (std::max(1.0, std::abs(mu)) * std::max(1.0, std::abs(rhs))));
  }
  for (std::size_t k = 0; k < cc.equalities.size(); ++k) {
    const double lhs = cc.equalities[k].lhs(x);
    const double rhs = cc.equalities[k].rhs;
    rep.primal = std::max(rep.primal, rel(lhs - rhs, std::abs(rhs)));
  }

  rep.max_residual = std::max({rep.stationarity, rep.primal, rep.dual,
                               rep.complementarity});
  return rep;
}

OfflineSolution solve_lp_with_duals(const ProblemInstance& instance) {
  const InstanceConstraints& con = instance.constraints;
  for (const CostFunction& f : instance.costs) {
    if (f.kind != CostKind::Linear) {
      throw SolverError("LP solver requires linear stage costs");
    }
  }

  const int n = con.total_dimension();
  std::vector<int> offset(static_cast<std::size_t>(con.T) + 1, 0);
  for (int t = 0; t < con.T; ++t) {
    offset[static_cast<std::size_t>(t) + 1] =
        offset[static_cast<std::size_t>(t)] + con.dimension(t);
  }

  LpProblem lp;
  lp.system.n = n;
  lp.c.assign(static_cast<std::size_t>(n), 0.0);
  lp.lower.resize(static_cast<std::size_t>(n));
  lp.upper.resize(static_cast<std::size_t>(n));
  double const_offset = 0.0;
  for (int t = 0; t < con.T; ++t) {
    const CostFunction& f = instance.costs[static_cast<std::size_t>(t)];
    const StageSet& box = con.stages[static_cast<std::size_t>(t)];
    const_offset += f.offset;
    for (int i = 0; i < box.dimension(); ++i) {
      const std::size_t col =
          static_cast<std::size_t>(offset[static_cast<std::size_t>(t)] + i);
      lp.c[col] = f.c_lin[static_cast<std::size_t>(i)];
      lp.lower[col] = box.lower[static_cast<std::size_t>(i)];
      lp.upper[col] = box.upper[static_cast<std::size_t>(i)];
    }
  }

  auto add_row = [&](const LinearCoupling& row, Relation rel) {
    AffineRow r;
    r.a.assign(static_cast<std::size_t>(n), 0.0);
    r.rel = rel;
    r.rhs = row.rhs;
    for (int t = 0; t < con.T; ++t) {
      if (row.coeffs[static_cast<std::size_t>(t)].empty()) continue;
      for (int i = 0; i < con.dimension(t); ++i) {
        r.a[static_cast<std::size_t>(offset[static_cast<std::size_t>(t)] + i)] =
            row.coeffs[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      }
    }
    lp.system.rows.push_back(std::move(r));
  };
  for (const LinearCoupling& row : con.coupling.inequalities) {
    add_row(row, Relation::LE);
  }
  for (const LinearCoupling& row : con.coupling.equalities) {
    add_row(row, Relation::EQ);
  }

  LpSolution raw = solve_lp(lp);

  OfflineSolution sol;
  sol.x.resize(static_cast<std::size_t>(con.T));
  for (int t = 0; t < con.T; ++t) {
    sol.x[static_cast<std::size_t>(t)].assign(
        raw.x.begin() + offset[static_cast<std::size_t>(t)],
        raw.x.begin() + offset[static_cast<std::size_t>(t) + 1]);
  }
  const std::size_t n_ineq = con.coupling.inequalities.size();
  sol.multipliers.mu.assign(raw.row_dual.begin(),
                            raw.row_dual.begin() + static_cast<long>(n_ineq));
  sol.multipliers.lambda.assign(
      raw.row_dual.begin() + static_cast<long>(n_ineq), raw.row_dual.end());
  sol.objective = raw.objective + const_offset;
  sol.kkt = kkt_residuals(instance, sol.x, sol.multipliers);
  if (sol.kkt.max_residual > 1e-6) {
    throw SolverError("LP solution failed its optimality certificate");
  }
  return sol;
}

OracleResult brute_force_oracle(const ProblemInstance& instance,
                                double resolution) {
  const InstanceConstraints& con = instance.constraints;
  const int n = con.total_dimension();
  if (n > 5) {
    throw ConfigError("brute-force reference is limited to 5 coordinates");
  }
  if (resolution <= 0.0) {
    throw ConfigError("brute-force resolution must be positive");
  }

  std::vector<int> offset(static_cast<std::size_t>(con.T) + 1, 0);
  std::vector<double> lo(static_cast<std::size_t>(n)),
      hi(static_cast<std::size_t>(n));
  for (int t = 0; t < con.T; ++t) {
    offset[static_cast<std::size_t>(t) + 1] =
        offset[static_cast<std::size_t>(t)] + con.dimension(t);
    const StageSet& box = con.stages[static_cast<std::size_t>(t)];
    for (int i = 0; i < box.dimension(); ++i) {
      const std::size_t col =
          static_cast<std::size_t>(offset[static_cast<std::size_t>(t)] + i);
      lo[col] = box.lower[static_cast<std::size_t>(i)];
      hi[col] = box.upper[static_cast<std::size_t>(i)];
      if (!bounded(lo[col]) || !bounded(hi[col])) {
        throw ConfigError("brute-force reference needs finite boxes");
      }
    }
  }

  auto flat_coeff = [&](const LinearCoupling& row, int col) {
    int t = 0;
    while (offset[static_cast<std::size_t>(t) + 1] <= col) ++t;
    return row.coeff(t, col - offset[static_cast<std::size_t>(t)]);
  };

  // Gauss-eliminate the equality rows so the grid only walks free
  // coordinates and equalities hold exactly.
  const std::size_t ne = con.coupling.equalities.size();
  std::vector<std::vector<double>> E(ne,
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<double> erhs(ne, 0.0);
  for (std::size_t k = 0; k < ne; ++k) {
    for (int j = 0; j < n; ++j) {
      E[k][static_cast<std::size_t>(j)] =
          flat_coeff(con.coupling.equalities[k], j);
    }
    erhs[k] = con.coupling.equalities[k].rhs;
  }
  std::vector<int> pivot_col;  // one per eliminated row, in elimination order
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < ne; ++col) {
    std::size_t piv = rank;
    double best = std::abs(E[rank][static_cast<std::size_t>(col)]);
    for (std::size_t r = rank + 1; r < ne; ++r) {
      double v = std::abs(E[r][static_cast<std::size_t>(col)]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-12) continue;
    std::swap(E[rank], E[piv]);
    std::swap(erhs[rank], erhs[piv]);
    const double dpiv = E[rank][static_cast<std::size_t>(col)];
    for (int j = 0; j < n; ++j) E[rank][static_cast<std::size_t>(j)] /= dpiv;
    erhs[rank] /= dpiv;
    for (std::size_t r = 0; r < ne; ++r) {
      if (r == rank) continue;
      const double f = E[r][static_cast<std::size_t>(col)];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        E[r][static_cast<std::size_t>(j)] -= f * E[rank][static_cast<std::size_t>(j)];
      }
      erhs[r] -= f * erhs[rank];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < ne; ++r) {
    if (std::abs(erhs[r]) > 1e-7 * std::max(1.0, std::abs(con.coupling
                                                              .equalities[r]
                                                              .rhs))) {
      throw InfeasibleError("equality rows are inconsistent");
    }
  }

  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < n; ++j) {
    if (!is_pivot[static_cast<std::size_t>(j)]) free_cols.push_back(j);
  }

  // How far coordinate j can drift when free coordinates snap by one grid
  // step: free coordinates move directly, pivots through the reduced rows.
  std::vector<double> move(static_cast<std::size_t>(n), 1.0);
  for (std::size_t r = 0; r < rank; ++r) {
    double span = 0.0;
    for (int j : free_cols) span += std::abs(E[r][static_cast<std::size_t>(j)]);
    move[static_cast<std::size_t>(pivot_col[r])] = span;
  }
  auto row_slack = [&](const LinearCoupling& row) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      s += std::abs(flat_coeff(row, j)) * move[static_cast<std::size_t>(j)];
    }
    return 0.5 * resolution * s;
  };
  std::vector<double> ineq_slack;
  for (const LinearCoupling& row : con.coupling.inequalities) {
    ineq_slack.push_back(row_slack(row));
  }

  std::vector<std::size_t> steps;
  double total_points = 1.0;
  for (int j : free_cols) {
    const double width = hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)];
    const std::size_t k =
        static_cast<std::size_t>(std::ceil(width / resolution - 1e-12));
    steps.push_back(k);
    total_points *= static_cast<double>(k + 1);
  }
  if (total_points > 6e7) {
    throw ConfigError("brute-force grid too large at this resolution");
  }

  std::vector<double> point(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> idx(free_cols.size(), 0);
  bool found = false;
  double best_obj = 0.0;
  std::vector<double> best_x;

  const std::size_t nf = free_cols.size();
  bool done = false;
  while (!done) {
    for (std::size_t f = 0; f < nf; ++f) {
      const std::size_t j = static_cast<std::size_t>(free_cols[f]);
      point[j] = std::min(lo[j] + static_cast<double>(idx[f]) * resolution, hi[j]);
    }
    bool ok = true;
    for (std::size_t r = 0; r < rank && ok; ++r) {
      double v = erhs[r];
      for (int j : free_cols) {
        v -= E[r][static_cast<std::size_t>(j)] * point[static_cast<std::size_t>(j)];
      }
      const std::size_t pc = static_cast<std::size_t>(pivot_col[r]);
      point[pc] = v;
      const double s = 0.5 * resolution * move[pc] +
                       1e-9 * std::max(1.0, std::abs(v));
      if (v < lo[pc] - s || v > hi[pc] + s) ok = false;
    }
    if (ok) {
      for (std::size_t q = 0; q < con.coupling.inequalities.size() && ok; ++q) {
        const LinearCoupling& row = con.coupling.inequalities[q];
        double lhsv = 0.0;
        for (int j = 0; j < n; ++j) {
          lhsv += flat_coeff(row, j) * point[static_cast<std::size_t>(j)];
        }
        if (lhsv > row.rhs + ineq_slack[q] +
                       1e-9 * std::max(1.0, std::abs(row.rhs))) {
          ok = false;
        }
      }
    }
    if (ok) {
      double obj = 0.0;
      for (int t = 0; t < con.T; ++t) {
        std::vector<double> xt(
            point.begin() + offset[static_cast<std::size_t>(t)],
            point.begin() + offset[static_cast<std::size_t>(t) + 1]);
        obj += instance.costs[static_cast<std::size_t>(t)].value(xt);
      }
      if (!found || obj < best_obj) {
        found = true;
        best_obj = obj;
        best_x = point;
      }
    }
    // advance the grid odometer
    done = true;
    for (std::size_t f = 0; f < nf; ++f) {
      if (idx[f] < steps[f]) {
        ++idx[f];
        std::fill(idx.begin(), idx.begin() + static_cast<long>(f), 0);
        done = false;
        break;
      }
    }
    if (nf == 0) done = true;
  }

  if (!found) {
    throw InfeasibleError("brute-force grid found no feasible point");
  }
  OracleResult res;
  res.objective = best_obj;
  res.x.resize(static_cast<std::size_t>(con.T));
  for (int t = 0; t < con.T; ++t) {
    res.x[static_cast<std::size_t>(t)].assign(
        best_x.begin() + offset[static_cast<std::size_t>(t)],
        best_x.begin() + offset[static_cast<std::size_t>(t) + 1]);
  }
  return res;
}

OfflineSolution solve_offline(const ProblemInstance& instance) {
  instance.validate();
  const InstanceConstraints& con = instance.constraints;
  bool all_linear = true;
  bool all_strict = true;
  for (const CostFunction& f : instance.costs) {
    all_linear = all_linear && f.kind == CostKind::Linear;
    all_strict = all_strict && f.strictly_convex() && f.has_inverse_gradient();
  }
  if (con.structure.kind != StructureKind::General && con.scalar_stages() &&
      all_strict) {
    return solve_nested_rap(instance);
  }
  if (all_linear) {
    return solve_lp_with_duals(instance);
  }
  throw SolverError(
      "no offline solver for this instance class (need a structured strictly "
      "convex problem or linear costs)");
}

}  // namespace oddo
