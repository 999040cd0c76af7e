/**
 * @file linear_system.hpp
 * @brief Carrier for the continuous subproblems: linear rows plus box bounds.
 */

#ifndef ISEO_LINEAR_SYSTEM_HPP
#define ISEO_LINEAR_SYSTEM_HPP

#include <vector>

#include "iseo/instance.hpp"

namespace iseo {

struct LinearSystem {
  int dim = 0;
  std::vector<LinearRow> rows;
  std::vector<double> lo, hi;

  static LinearSystem box(int dim, double lo_value, double hi_value) {
    LinearSystem s;
    s.dim = dim;
    s.lo.assign(static_cast<std::size_t>(dim), lo_value);
    s.hi.assign(static_cast<std::size_t>(dim), hi_value);
    return s;
  }

  void add_row(std::vector<double> coeffs, Sense sense, double rhs) {
    rows.push_back(LinearRow{std::move(coeffs), sense, rhs});
  }

  /// Largest row violation at x (0 when every row holds).
  double max_violation(const std::vector<double>& x) const;
};

}  // namespace iseo

#endif  // ISEO_LINEAR_SYSTEM_HPP
