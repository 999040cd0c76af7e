/**
 * @file lp.hpp
 * @brief Dense two-phase simplex: feasibility and linear minimization.
 *
 * Bland's rule in both phases guarantees termination.
 */

#ifndef ISEO_LP_HPP
#define ISEO_LP_HPP

#include <vector>

#include "iseo/linear_system.hpp"

namespace iseo {

struct LpPoint {
  bool feasible = false;
  std::vector<double> x;  // valid only when feasible
};

/// Returns a point satisfying every row of the system within 1e-9, or an
/// infeasible verdict when the Phase-I optimum exceeds 1e-9. Box bounds must
/// be finite. Throws std::invalid_argument on dimension mismatch.
LpPoint lp_feasible(const LinearSystem& system);

struct LpOptimum {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

/// Minimizes objective.x over the system (finite box keeps it bounded).
LpOptimum lp_minimize(const LinearSystem& system, const std::vector<double>& objective);

}  // namespace iseo

#endif  // ISEO_LP_HPP
