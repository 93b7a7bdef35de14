#include "oddo/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "oddo/errors.hpp"
#include "oddo/model.hpp"

namespace oddo {

namespace {

constexpr double kEps = 1e-9;
constexpr double kPivotEps = 1e-10;
const double kInf = std::numeric_limits<double>::infinity();

double debound(double b) {
  if (b >= kNoBound / 2) return kInf;
  if (b <= -kNoBound / 2) return -kInf;
  return b;
}

enum class Status { Basic, AtLower, AtUpper, FreeZero };

// Dense two-phase tableau state.  Columns: structural variables first, then
// one slack per row, then one artificial per row.
struct Tableau {
  int m = 0;        // rows
  int n_struct = 0; // structural columns
  int n = 0;        // total columns
  std::vector<double> A;     // m x n, row-major
  std::vector<double> b;
  std::vector<double> lo, hi;
  std::vector<double> cost;  // current phase costs
  std::vector<double> x;
  std::vector<Status> status;
  std::vector<int> basis;    // column occupying each row position
  std::vector<double> binv;  // m x m, row-major

  double a_at(int i, int j) const {
    return A[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(j)];
  }

  std::vector<double> column_times_binv(int j) const {
    std::vector<double> w(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        s += binv[static_cast<std::size_t>(k) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(i)] *
             a_at(i, j);
      }
      w[static_cast<std::size_t>(k)] = s;
    }
    return w;
  }

  std::vector<double> dual_y() const {
    std::vector<double> y(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        s += cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(k)])] *
             binv[static_cast<std::size_t>(k) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(i)];
      }
      y[static_cast<std::size_t>(i)] = s;
    }
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) {
      d -= y[static_cast<std::size_t>(i)] * a_at(i, j);
    }
    return d;
  }

  // Recompute binv from the current basis and restore basic values exactly.
  void refactor() {
    std::vector<double> mat(static_cast<std::size_t>(m) *
                            static_cast<std::size_t>(m));
    std::vector<double> inv(static_cast<std::size_t>(m) *
                                static_cast<std::size_t>(m),
                            0.0);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(k)] =
            a_at(i, basis[static_cast<std::size_t>(k)]);
      }
      inv[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
          static_cast<std::size_t>(i)] = 1.0;
    }
    // Gauss-Jordan with partial pivoting.
    for (int col = 0; col < m; ++col) {
      int piv = col;
      double best = std::abs(mat[static_cast<std::size_t>(col) *
                                     static_cast<std::size_t>(m) +
                                 static_cast<std::size_t>(col)]);
      for (int r = col + 1; r < m; ++r) {
        double v = std::abs(mat[static_cast<std::size_t>(r) *
                                    static_cast<std::size_t>(m) +
                                static_cast<std::size_t>(col)]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best < 1e-12) throw SolverError("simplex basis became singular");
      if (piv != col) {
        for (int k = 0; k < m; ++k) {
          std::swap(mat[static_cast<std::size_t>(piv) *
                            static_cast<std::size_t>(m) +
                        static_cast<std::size_t>(k)],
                    mat[static_cast<std::size_t>(col) *
                            static_cast<std::size_t>(m) +
                        static_cast<std::size_t>(k)]);
          std::swap(inv[static_cast<std::size_t>(piv) *
                            static_cast<std::size_t>(m) +
                        static_cast<std::size_t>(k)],
                    inv[static_cast<std::size_t>(col) *
                            static_cast<std::size_t>(m) +
                        static_cast<std::size_t>(k)]);
        }
      }
      double d = mat[static_cast<std::size_t>(col) *
                         static_cast<std::size_t>(m) +
                     static_cast<std::size_t>(col)];
      for (int k = 0; k < m; ++k) {
        mat[static_cast<std::size_t>(col) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(k)] /= d;
        inv[static_cast<std::size_t>(col) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(k)] /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        double f = mat[static_cast<std::size_t>(r) *
                           static_cast<std::size_t>(m) +
                       static_cast<std::size_t>(col)];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) {
          mat[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) +
              static_cast<std::size_t>(k)] -=
              f * mat[static_cast<std::size_t>(col) *
                          static_cast<std::size_t>(m) +
                      static_cast<std::size_t>(k)];
          inv[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) +
              static_cast<std::size_t>(k)] -=
              f * inv[static_cast<std::size_t>(col) *
                          static_cast<std::size_t>(m) +
                      static_cast<std::size_t>(k)];
        }
      }
    }
    binv = std::move(inv);
    restore_basics();
  }

  // x_B = binv * (b - A_N x_N)
  void restore_basics() {
    std::vector<double> rhs = b;
    for (int j = 0; j < n; ++j) {
      if (status[static_cast<std::size_t>(j)] == Status::Basic) continue;
      double v = x[static_cast<std::size_t>(j)];
      if (v == 0.0) continue;
      for (int i = 0; i < m; ++i) {
        rhs[static_cast<std::size_t>(i)] -= a_at(i, j) * v;
      }
    }
    for (int k = 0; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        s += binv[static_cast<std::size_t>(k) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(i)] *
             rhs[static_cast<std::size_t>(i)];
      }
      x[static_cast<std::size_t>(basis[static_cast<std::size_t>(k)])] = s;
    }
  }

  double objective() const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      s += cost[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    }
    return s;
  }

  // One Bland iteration.  Returns false at optimality; throws on an
  // unbounded improving ray.
  bool iterate() {
    std::vector<double> y = dual_y();
    int enter = -1;
    int dir = 0;
    for (int j = 0; j < n; ++j) {
      Status st = status[static_cast<std::size_t>(j)];
      if (st == Status::Basic) continue;
      if (lo[static_cast<std::size_t>(j)] == hi[static_cast<std::size_t>(j)]) {
        continue;  // pegged (fixed) column can never improve
      }
      double d = reduced_cost(j, y);
      if (st == Status::AtLower && d < -kEps) {
        enter = j;
        dir = +1;
      } else if (st == Status::AtUpper && d > kEps) {
        enter = j;
        dir = -1;
      } else if (st == Status::FreeZero && std::abs(d) > kEps) {
        enter = j;
        dir = d < 0 ? +1 : -1;
      }
      if (enter >= 0) break;  // Bland: first eligible index
    }
    if (enter < 0) return false;

    std::vector<double> w = column_times_binv(enter);
    double limit = kInf;
    int leave_pos = -1;
    double leave_at = 0.0;  // bound value the leaving variable lands on
    // The entering variable's own span gives a bound-flip candidate.
    double span = hi[static_cast<std::size_t>(enter)] -
                  lo[static_cast<std::size_t>(enter)];
    if (std::isfinite(span)) limit = span;
    for (int k = 0; k < m; ++k) {
      double g = dir * w[static_cast<std::size_t>(k)];
      int jb = basis[static_cast<std::size_t>(k)];
      double xv = x[static_cast<std::size_t>(jb)];
      double cand = kInf;
      double at = 0.0;
      if (g > kPivotEps) {
        double lb = lo[static_cast<std::size_t>(jb)];
        if (std::isfinite(lb)) {
          cand = (xv - lb) / g;
          at = lb;
        }
      } else if (g < -kPivotEps) {
        double ub = hi[static_cast<std::size_t>(jb)];
        if (std::isfinite(ub)) {
          cand = (ub - xv) / (-g);
          at = ub;
        }
      }
      if (cand < limit - 1e-15 ||
          (cand < limit + 1e-15 && leave_pos >= 0 &&
           jb < basis[static_cast<std::size_t>(leave_pos)])) {
        limit = cand;
        leave_pos = k;
        leave_at = at;
      }
    }
    if (!std::isfinite(limit)) {
      throw SolverError("linear program is unbounded");
    }
    double step = std::max(limit, 0.0);

    // Apply the move.
    for (int k = 0; k < m; ++k) {
      int jb = basis[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(jb)] -=
          step * dir * w[static_cast<std::size_t>(k)];
    }
    x[static_cast<std::size_t>(enter)] += step * dir;

    if (leave_pos < 0) {
      // Bound flip: no basis change.
      status[static_cast<std::size_t>(enter)] =
          dir > 0 ? Status::AtUpper : Status::AtLower;
      x[static_cast<std::size_t>(enter)] =
          dir > 0 ? hi[static_cast<std::size_t>(enter)]
                  : lo[static_cast<std::size_t>(enter)];
      return true;
    }

    int leave = basis[static_cast<std::size_t>(leave_pos)];
    x[static_cast<std::size_t>(leave)] = leave_at;
    status[static_cast<std::size_t>(leave)] =
        (leave_at == lo[static_cast<std::size_t>(leave)]) ? Status::AtLower
                                                          : Status::AtUpper;
    status[static_cast<std::size_t>(enter)] = Status::Basic;
    basis[static_cast<std::size_t>(leave_pos)] = enter;

    // Product-form update of binv for the replaced basis column.
    double piv = w[static_cast<std::size_t>(leave_pos)];
    if (std::abs(piv) < kPivotEps) {
      throw SolverError("simplex pivot element vanished");
    }
    for (int i = 0; i < m; ++i) {
      binv[static_cast<std::size_t>(leave_pos) *
               static_cast<std::size_t>(m) +
           static_cast<std::size_t>(i)] /= piv;
    }
    for (int k = 0; k < m; ++k) {
      if (k == leave_pos) continue;
      double f = w[static_cast<std::size_t>(k)];
      if (f == 0.0) continue;
      for (int i = 0; i < m; ++i) {
        binv[static_cast<std::size_t>(k) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(i)] -=
            f * binv[static_cast<std::size_t>(leave_pos) *
                         static_cast<std::size_t>(m) +
                     static_cast<std::size_t>(i)];
      }
    }
    return true;
  }

  void run(int max_iters) {
    int since_refactor = 0;
    for (int it = 0; it < max_iters; ++it) {
      if (!iterate()) return;
      if (++since_refactor >= 100) {
        refactor();
        since_refactor = 0;
      }
    }
    throw SolverError("simplex iteration limit exceeded");
  }
};

}  // namespace

void LpProblem::validate() const {
  const std::size_t n = static_cast<std::size_t>(system.n);
  if (c.size() != n || lower.size() != n || upper.size() != n) {
    throw ConfigError("LP arrays disagree with the number of variables");
  }
  for (const AffineRow& row : system.rows) {
    if (row.a.size() != n) {
      throw ConfigError("LP row length disagrees with the number of variables");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (debound(lower[j]) > debound(upper[j])) {
      throw ConfigError("LP variable has lower bound above upper bound");
    }
  }
}

LpSolution solve_lp(const LpProblem& problem) {
  problem.validate();
  const int ns = problem.system.n;
  const int m = static_cast<int>(problem.system.rows.size());

  Tableau t;
  t.m = m;
  t.n_struct = ns;
  t.n = ns + 2 * m;
  t.A.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(t.n), 0.0);
  t.b.resize(static_cast<std::size_t>(m));
  t.lo.resize(static_cast<std::size_t>(t.n));
  t.hi.resize(static_cast<std::size_t>(t.n));
  t.cost.assign(static_cast<std::size_t>(t.n), 0.0);
  t.x.assign(static_cast<std::size_t>(t.n), 0.0);
  t.status.assign(static_cast<std::size_t>(t.n), Status::AtLower);
  t.basis.resize(static_cast<std::size_t>(m));
  t.binv.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m),
                0.0);

  for (int j = 0; j < ns; ++j) {
    t.lo[static_cast<std::size_t>(j)] =
        debound(problem.lower[static_cast<std::size_t>(j)]);
    t.hi[static_cast<std::size_t>(j)] =
        debound(problem.upper[static_cast<std::size_t>(j)]);
  }
  for (int i = 0; i < m; ++i) {
    const AffineRow& row = problem.system.rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < ns; ++j) {
      t.A[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.n) +
          static_cast<std::size_t>(j)] = row.a[static_cast<std::size_t>(j)];
    }
    t.b[static_cast<std::size_t>(i)] = row.rhs;
    const int slack = ns + i;
    t.A[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.n) +
        static_cast<std::size_t>(slack)] = 1.0;
    t.lo[static_cast<std::size_t>(slack)] = 0.0;
    t.hi[static_cast<std::size_t>(slack)] =
        row.rel == Relation::LE ? kInf : 0.0;
  }

  // Structural start: a finite bound, or zero for free columns.
  for (int j = 0; j < ns; ++j) {
    double lb = t.lo[static_cast<std::size_t>(j)];
    double ub = t.hi[static_cast<std::size_t>(j)];
    if (std::isfinite(lb)) {
      t.x[static_cast<std::size_t>(j)] = lb;
      t.status[static_cast<std::size_t>(j)] = Status::AtLower;
    } else if (std::isfinite(ub)) {
      t.x[static_cast<std::size_t>(j)] = ub;
      t.status[static_cast<std::size_t>(j)] = Status::AtUpper;
    } else {
      t.x[static_cast<std::size_t>(j)] = 0.0;
      t.status[static_cast<std::size_t>(j)] = Status::FreeZero;
    }
  }

  // Phase-1 basis: the row slack when it can absorb the residual, otherwise
  // a signed artificial.
  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    scale = std::max(scale, std::abs(t.b[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < m; ++i) {
    double resid = t.b[static_cast<std::size_t>(i)];
    for (int j = 0; j < ns; ++j) {
      resid -= t.a_at(i, j) * t.x[static_cast<std::size_t>(j)];
    }
    const int slack = ns + i;
    const int art = ns + m + i;
    const bool slack_ok =
        problem.system.rows[static_cast<std::size_t>(i)].rel == Relation::LE &&
        resid >= 0.0;
    if (slack_ok) {
      t.basis[static_cast<std::size_t>(i)] = slack;
      t.status[static_cast<std::size_t>(slack)] = Status::Basic;
      t.x[static_cast<std::size_t>(slack)] = resid;
      t.lo[static_cast<std::size_t>(art)] = 0.0;
      t.hi[static_cast<std::size_t>(art)] = 0.0;
    } else {
      t.A[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.n) +
          static_cast<std::size_t>(art)] = resid >= 0.0 ? 1.0 : -1.0;
      t.basis[static_cast<std::size_t>(i)] = art;
      t.status[static_cast<std::size_t>(art)] = Status::Basic;
      t.x[static_cast<std::size_t>(art)] = std::abs(resid);
      t.lo[static_cast<std::size_t>(art)] = 0.0;
      t.hi[static_cast<std::size_t>(art)] = kInf;
      t.cost[static_cast<std::size_t>(art)] = 1.0;
    }
  }
  for (int i = 0; i < m; ++i) {
    const int art = ns + m + i;
    if (t.status[static_cast<std::size_t>(art)] != Status::Basic &&
        t.A[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.n) +
            static_cast<std::size_t>(art)] == 0.0) {
      // Unused artificial: give it a harmless column so refactors never see
      // an all-zero basis candidate, and peg it shut.
      t.A[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.n) +
          static_cast<std::size_t>(art)] = 1.0;
      t.lo[static_cast<std::size_t>(art)] = 0.0;
      t.hi[static_cast<std::size_t>(art)] = 0.0;
    }
  }
  t.refactor();

  const int iter_cap = 20000 + 200 * (t.n + m);
  t.run(iter_cap);
  if (t.objective() > 1e-7 * scale) {
    throw InfeasibleError("linear program has no feasible point");
  }

  // Shut the artificials before phase 2.  Basic artificials sit at zero;
  // pegging their bounds keeps them there through later pivots.
  for (int i = 0; i < m; ++i) {
    const int art = ns + m + i;
    t.cost[static_cast<std::size_t>(art)] = 0.0;
    t.lo[static_cast<std::size_t>(art)] = 0.0;
    t.hi[static_cast<std::size_t>(art)] = 0.0;
    if (t.status[static_cast<std::size_t>(art)] != Status::Basic) {
      t.x[static_cast<std::size_t>(art)] = 0.0;
      t.status[static_cast<std::size_t>(art)] = Status::AtLower;
    }
  }
  for (int j = 0; j < ns; ++j) {
    t.cost[static_cast<std::size_t>(j)] = problem.c[static_cast<std::size_t>(j)];
  }
  t.run(iter_cap);
  t.refactor();

  LpSolution sol;
  sol.x.assign(t.x.begin(), t.x.begin() + ns);
  std::vector<double> y = t.dual_y();
  sol.row_dual.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    // Stationarity uses c + sum dual * a = 0; the simplex y satisfies
    // c - A^T y = reduced costs, so the reported dual is -y.  Inequality
    // duals are clipped at zero against roundoff.
    double v = -y[static_cast<std::size_t>(i)];
    if (problem.system.rows[static_cast<std::size_t>(i)].rel == Relation::LE) {
      v = std::max(v, 0.0);
    }
    sol.row_dual[static_cast<std::size_t>(i)] = v;
  }
  sol.objective = 0.0;
  for (int j = 0; j < ns; ++j) {
    sol.objective += problem.c[static_cast<std::size_t>(j)] *
                     t.x[static_cast<std::size_t>(j)];
  }
  return sol;
}

}  // namespace oddo
