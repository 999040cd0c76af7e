/**
 * @file qp.hpp
 * @brief Small dense convex QP solver over a linear system.
 *
 * Minimizes 0.5 x'Qx + c'x with Q symmetric PSD. Box-plus-few-rows systems
 * go through projected gradient with Dykstra projections; everything else
 * uses a primal active-set loop started from a Phase-I point.
 */

#ifndef ISEO_QP_HPP
#define ISEO_QP_HPP

#include <vector>

#include "iseo/linear_system.hpp"

namespace iseo {

enum class QpStatus { Optimal, IterationLimit, Infeasible };

struct QpResult {
  QpStatus status = QpStatus::Infeasible;
  std::vector<double> x;  // best iterate, attached even on iteration limit
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Q given as a dense symmetric matrix (diagonal objectives pass the
/// diagonal embedded). Unbounded box entries are permitted. A feasible
/// start skips the internal phase-one solve; an infeasible one is ignored.
QpResult solve_box_qp(const std::vector<std::vector<double>>& Q, const std::vector<double>& c,
                      const LinearSystem& system, int max_iterations = 10000,
                      const std::vector<double>* start = nullptr);

}  // namespace iseo

#endif  // ISEO_QP_HPP
