#include "oddo/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oddo/errors.hpp"

namespace oddo {

namespace {

constexpr double kZeroCoeff = 1e-12;
constexpr double kEmptyTol = 1e-9;

bool all_zero(const std::vector<double>& a) {
  return std::all_of(a.begin(), a.end(),
                     [](double v) { return std::abs(v) <= kZeroCoeff; });
}

// Scale so the largest |coefficient| is 1; makes duplicate detection and
// certificate checks scale-free.
void normalize(AffineRow& row) {
  double scale = 0.0;
  for (double v : row.a) scale = std::max(scale, std::abs(v));
  if (scale <= kZeroCoeff) return;
  for (double& v : row.a) v /= scale;
  row.rhs /= scale;
}

bool same_coefficients(const AffineRow& a, const AffineRow& b) {
  for (size_t i = 0; i < a.a.size(); ++i)
    if (std::abs(a.a[i] - b.a[i]) > 1e-9) return false;
  return true;
}

// Keeps certificates, drops trivially-true zero rows and rows dominated by an
// identical-coefficient row with smaller rhs.
std::vector<AffineRow> prune(std::vector<AffineRow> rows) {
  std::vector<AffineRow> kept;
  kept.reserve(rows.size());
  for (auto& row : rows) {
    normalize(row);
    if (all_zero(row.a)) {
      if (row.rhs < -kEmptyTol) kept.push_back(std::move(row));  // certificate
      continue;
    }
    bool dominated = false;
    for (auto& other : kept) {
      if (all_zero(other.a) || !same_coefficients(row, other)) continue;
      if (other.rhs <= row.rhs) {
        dominated = true;
      } else {
        other.rhs = row.rhs;
        dominated = true;
      }
      break;
    }
    if (!dominated) kept.push_back(std::move(row));
  }
  return kept;
}

}  // namespace

bool AffineSystem::infeasible_certificate(double tol) const {
  for (const auto& row : rows)
    if (all_zero(row.a) && row.rhs < -tol) return true;
  return false;
}

AffineSystem remaining_horizon_system(
    const InstanceConstraints& constraints,
    const std::vector<std::vector<double>>& fixed_prefix, int t_bar) {
  if (t_bar < 0 || t_bar >= constraints.T)
    throw ConfigError("stage index out of range");
  if (static_cast<int>(fixed_prefix.size()) < t_bar)
    throw ConfigError("prefix shorter than t_bar");

  std::vector<int> offset(constraints.T, 0);
  int n = 0;
  for (int t = t_bar; t < constraints.T; ++t) {
    offset[t] = n;
    n += constraints.dimension(t);
  }

  AffineSystem sys;
  sys.n = n;
  auto add_coupling = [&](const LinearCoupling& row, Relation rel) {
    AffineRow r;
    r.a.assign(n, 0.0);
    r.rel = rel;
    r.rhs = row.rhs - row.prefix_lhs(fixed_prefix, t_bar);
    bool touches = false;
    for (int t = t_bar; t < constraints.T; ++t) {
      for (int i = 0; i < constraints.dimension(t); ++i) {
        const double c = row.coeff(t, i);
        if (c != 0.0) {
          r.a[offset[t] + i] = c;
          touches = true;
        }
      }
    }
    // Rows fully determined by the prefix become 0 <= rhs checks.
    if (!touches && rel == Relation::LE && r.rhs >= 0.0) return;
    sys.rows.push_back(std::move(r));
  };
  for (const auto& row : constraints.coupling.inequalities)
    add_coupling(row, Relation::LE);
  for (const auto& row : constraints.coupling.equalities)
    add_coupling(row, Relation::EQ);

  for (int t = t_bar + 1; t < constraints.T; ++t) {
    const auto& box = constraints.stages[t];
    for (int i = 0; i < box.dimension(); ++i) {
      AffineRow up;
      up.a.assign(n, 0.0);
      up.a[offset[t] + i] = 1.0;
      up.rhs = box.upper[i];
      sys.rows.push_back(std::move(up));
      AffineRow down;
      down.a.assign(n, 0.0);
      down.a[offset[t] + i] = -1.0;
      down.rhs = -box.lower[i];
      sys.rows.push_back(std::move(down));
    }
  }
  return sys;
}

AffineSystem fme_eliminate(const AffineSystem& system, int var_index) {
  if (var_index < 0 || var_index >= system.n)
    throw ConfigError("fme_eliminate: variable index out of range");

  // Split equalities into <= pairs, then partition rows by the sign of the
  // eliminated variable's coefficient.
  std::vector<AffineRow> pos, neg, rest;
  auto classify = [&](AffineRow row) {
    const double c = row.a[var_index];
    if (c > kZeroCoeff)
      pos.push_back(std::move(row));
    else if (c < -kZeroCoeff)
      neg.push_back(std::move(row));
    else
      rest.push_back(std::move(row));
  };
  for (const auto& row : system.rows) {
    if (row.rel == Relation::EQ) {
      AffineRow le = row;
      le.rel = Relation::LE;
      AffineRow ge;
      ge.rel = Relation::LE;
      ge.rhs = -row.rhs;
      ge.a.resize(row.a.size());
      for (size_t i = 0; i < row.a.size(); ++i) ge.a[i] = -row.a[i];
      classify(std::move(le));
      classify(std::move(ge));
    } else {
      classify(row);
    }
  }

  auto strip = [&](const AffineRow& row) {
    AffineRow out;
    out.rel = Relation::LE;
    out.rhs = row.rhs;
    out.a.reserve(row.a.size() - 1);
    for (int i = 0; i < static_cast<int>(row.a.size()); ++i)
      if (i != var_index) out.a.push_back(row.a[i]);
    return out;
  };

  std::vector<AffineRow> combined;
  combined.reserve(rest.size() + pos.size() * neg.size());
  for (const auto& row : rest) combined.push_back(strip(row));
  for (const auto& p : pos) {
    const double cp = p.a[var_index];
    for (const auto& m : neg) {
      const double cm = -m.a[var_index];
      // cm * p + cp * m cancels the variable; both multipliers positive.
      AffineRow r;
      r.rel = Relation::LE;
      r.a.resize(p.a.size() - 1);
      int k = 0;
      for (int i = 0; i < static_cast<int>(p.a.size()); ++i) {
        if (i == var_index) continue;
        r.a[k++] = cm * p.a[i] + cp * m.a[i];
      }
      r.rhs = cm * p.rhs + cp * m.rhs;
      combined.push_back(std::move(r));
    }
  }

  AffineSystem out;
  out.n = system.n - 1;
  out.rows = prune(std::move(combined));
  return out;
}

namespace {

StageInterval interval_from_1d(const AffineSystem& sys, double box_lo,
                               double box_hi) {
  double lo = box_lo, hi = box_hi;
  for (const auto& row : sys.rows) {
    const double c = row.a.empty() ? 0.0 : row.a[0];
    const bool eq = row.rel == Relation::EQ;
    if (std::abs(c) <= kZeroCoeff) {
      const bool violated = eq ? std::abs(row.rhs) > kEmptyTol
                               : row.rhs < -kEmptyTol;
      if (violated)
        throw InfeasibleError(
            "prefix admits no completion: derived row 0 <= " +
            std::to_string(row.rhs));
      continue;
    }
    if (c > 0.0) {
      hi = std::min(hi, row.rhs / c);
      if (eq) lo = std::max(lo, row.rhs / c);
    } else {
      lo = std::max(lo, row.rhs / c);
      if (eq) hi = std::min(hi, row.rhs / c);
    }
  }
  if (lo > hi) {
    if (lo - hi <= kEmptyTol) {
      const double mid = 0.5 * (lo + hi);
      return {mid, mid};
    }
    throw InfeasibleError("projected stage interval is empty: lo " +
                          std::to_string(lo) + " > hi " + std::to_string(hi));
  }
  return {lo, hi};
}

}  // namespace

AffineSystem project_onto_stage_system(
    const InstanceConstraints& constraints,
    const std::vector<std::vector<double>>& prefix, int t_bar) {
  AffineSystem sys = remaining_horizon_system(constraints, prefix, t_bar);
  const int keep = constraints.dimension(t_bar);
  while (sys.n > keep) {
    sys = fme_eliminate(sys, sys.n - 1);
    if (sys.infeasible_certificate())
      throw InfeasibleError("prefix admits no completion (elimination "
                            "produced 0 <= negative)");
  }
  const auto& box = constraints.stages[t_bar];
  for (int i = 0; i < keep; ++i) {
    AffineRow up;
    up.a.assign(keep, 0.0);
    up.a[i] = 1.0;
    up.rhs = box.upper[i];
    sys.rows.push_back(std::move(up));
    AffineRow down;
    down.a.assign(keep, 0.0);
    down.a[i] = -1.0;
    down.rhs = -box.lower[i];
    sys.rows.push_back(std::move(down));
  }
  return sys;
}

StageInterval project_onto_stage(const InstanceConstraints& constraints,
                                 const std::vector<std::vector<double>>& prefix,
                                 int t_bar) {
  if (constraints.dimension(t_bar) != 1)
    throw ConfigError("project_onto_stage needs a one-dimensional stage; use "
                      "project_onto_stage_system instead");
  AffineSystem sys = remaining_horizon_system(constraints, prefix, t_bar);
  while (sys.n > 1) {
    sys = fme_eliminate(sys, sys.n - 1);
    if (sys.infeasible_certificate())
      throw InfeasibleError("prefix admits no completion (elimination "
                            "produced 0 <= negative)");
  }
  const auto& box = constraints.stages[t_bar];
  return interval_from_1d(sys, box.lower[0], box.upper[0]);
}

CapacityBounds battery_projection_bounds(double dt,
                                         const std::vector<double>& l,
                                         const std::vector<double>& u,
                                         const std::vector<double>& C_lo,
                                         const std::vector<double>& C_hi,
                                         double C) {
  const int T = static_cast<int>(l.size());
  if (T < 1 || u.size() != l.size() ||
      static_cast<int>(C_lo.size()) != T - 1 ||
      static_cast<int>(C_hi.size()) != T - 1 || dt <= 0.0)
    throw ConfigError("battery_projection_bounds: inconsistent sizes");
  CapacityBounds b;
  b.lo.assign(T, 0.0);
  b.hi.assign(T, 0.0);
  b.lo[T - 1] = C;
  b.hi[T - 1] = C;
  for (int t = T - 2; t >= 0; --t) {
    b.lo[t] = std::max(C_lo[t], b.lo[t + 1] - dt * u[t + 1]);
    b.hi[t] = std::min(C_hi[t], b.hi[t + 1] - dt * l[t + 1]);
    if (b.lo[t] > b.hi[t] + kEmptyTol)
      throw InfeasibleError("battery bounds cross at stage " +
                            std::to_string(t + 1) + ": instance infeasible");
  }
  return b;
}

StageInterval battery_stage_interval(const CapacityBounds& bounds, double dt,
                                     const std::vector<double>& l,
                                     const std::vector<double>& u, int t_bar,
                                     double prefix_energy) {
  if (t_bar < 0 || t_bar >= static_cast<int>(bounds.lo.size()))
    throw ConfigError("battery_stage_interval: stage out of range");
  double lo = std::max((bounds.lo[t_bar] - prefix_energy) / dt, l[t_bar]);
  double hi = std::min((bounds.hi[t_bar] - prefix_energy) / dt, u[t_bar]);
  if (lo > hi) {
    if (lo - hi <= kEmptyTol) {
      const double mid = 0.5 * (lo + hi);
      return {mid, mid};
    }
    throw InfeasibleError("battery stage interval empty at stage " +
                          std::to_string(t_bar + 1));
  }
  return {lo, hi};
}

}  // namespace oddo
