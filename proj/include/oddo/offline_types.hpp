#pragma once

#include <vector>

#include "oddo/model.hpp"

namespace oddo {

// Scaled KKT residuals for a primal/dual pair.  Each component is normalized
// by the local magnitude (gradient size for stationarity, rhs size for
// primal/complementarity), so the 1e-6 acceptance threshold is relative.
struct KktReport {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  double max_residual = 0.0;
};

struct OfflineSolution {
  std::vector<std::vector<double>> x;
  MultiplierVector multipliers;
  double objective = 0.0;
  KktReport kkt;
};

}  // namespace oddo
