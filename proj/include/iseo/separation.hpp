/**
 * @file separation.hpp
 * @brief Linear separation of labeled sub-solution pools into surrogate
 *        weights: max-margin QP (SVM) and potential minimization over
 *        normalized valid inequalities (SEP).
 */

#ifndef ISEO_SEPARATION_HPP
#define ISEO_SEPARATION_HPP

#include <stdexcept>
#include <vector>

#include "iseo/bits.hpp"
#include "iseo/instance.hpp"

namespace iseo {

struct SeparationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inequality a.w <= b normalized to unit dual norm, ||(a,b)||_* = 1.
struct ScaledInequality {
  std::vector<double> a;
  double b = 0.0;
};

/// Dual norm ||(a,b)||_* = (1/sqrt(2)) * ||(R a_1, ..., R a_n, b)||_2 with
/// R = sqrt(n), paired with the primal norm sqrt(2)||(x_1/R,...,x_n/R, y)||_2.
double dual_norm(const std::vector<double>& a, double b, double radius);

ScaledInequality normalize_inequality(const std::vector<double>& a, double b, double radius);

struct SeparationDiagnostics {
  bool degenerate_fallback = false;  // SEP gradient denominator below 1e-10
  bool projected = false;            // output needed projection onto the domain
  int misclassified = 0;             // labeled points the output fails to separate
};

/// Max-margin separator. Solves
///   min sum w_j^2  s.t.  beta - w.s+ >= 1, beta - w.s- <= -1,
///                        w_j <= beta, w >= 0
/// and returns w*/beta*, projected onto the domain if its extra cuts are
/// violated. Throws SeparationError when the pools are not separable.
std::vector<double> svm_separate(const WeightDomain& domain, const std::vector<Bits>& pos,
                                 const std::vector<Bits>& neg,
                                 SeparationDiagnostics* diagnostics = nullptr);

/// Potential-minimizing separator. Builds the normalized inequality set
/// from the domain cuts, (s+, 1) and (-s-, -1), minimizes
/// Phi(a, b) = 0.25 ||(R a, b)||_2^2 over the convex hull by Frank-Wolfe and
/// maps the gradient at the minimizer back to weights, clamped to [0,1] and
/// projected onto the domain. Falls back to previous_w when the gradient
/// denominator degenerates. No separation guarantee.
std::vector<double> sep_separate(const WeightDomain& domain, const std::vector<Bits>& pos,
                                 const std::vector<Bits>& neg, int n,
                                 const std::vector<double>& previous_w,
                                 SeparationDiagnostics* diagnostics = nullptr);

}  // namespace iseo

#endif  // ISEO_SEPARATION_HPP
