/**
 * @file frank_wolfe.hpp
 * @brief Frank-Wolfe minimization of a diagonal quadratic over a convex hull.
 */

#ifndef ISEO_FRANK_WOLFE_HPP
#define ISEO_FRANK_WOLFE_HPP

#include <vector>

namespace iseo {

/// Phi(g) = 0.5 * sum_k diag[k] * g[k]^2.
struct DiagonalQuadratic {
  std::vector<double> diag;

  double value(const std::vector<double>& g) const {
    double v = 0.0;
    for (std::size_t k = 0; k < diag.size(); ++k) v += diag[k] * g[k] * g[k];
    return 0.5 * v;
  }

  std::vector<double> gradient(const std::vector<double>& g) const {
    std::vector<double> grad(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) grad[k] = diag[k] * g[k];
    return grad;
  }
};

struct FrankWolfeResult {
  std::vector<double> coefficients;  // convex combination over input points
  std::vector<double> point;
  double value = 0.0;
  double gap = 0.0;  // Frank-Wolfe duality gap at termination
  int iterations = 0;
};

/// Minimizes phi over conv(points) with away steps and exact line search,
/// stopping at duality gap <= tol or max_iter, whichever comes first. The
/// potential value never increases across iterations. Throws
/// std::invalid_argument on an empty point set.
FrankWolfeResult frank_wolfe(const std::vector<std::vector<double>>& points,
                             const DiagonalQuadratic& phi, int max_iter = 5000,
                             double tol = 1e-8);

}  // namespace iseo

#endif  // ISEO_FRANK_WOLFE_HPP
