#include "iseo/frank_wolfe.hpp"

#include <cmath>
#include <stdexcept>

namespace iseo {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

FrankWolfeResult frank_wolfe(const std::vector<std::vector<double>>& points,
                             const DiagonalQuadratic& phi, int max_iter, double tol) {
  if (points.empty()) throw std::invalid_argument("frank_wolfe: empty point set");
  const std::size_t d = phi.diag.size();
  for (const auto& p : points) {
    if (p.size() != d) throw std::invalid_argument("frank_wolfe: point dimension mismatch");
  }
  const std::size_t nv = points.size();

  // Start from the vertex with the smallest potential (lowest index on ties).
  std::size_t start = 0;
  double best = phi.value(points[0]);
  for (std::size_t v = 1; v < nv; ++v) {
    const double val = phi.value(points[v]);
    if (val < best) {
      best = val;
      start = v;
    }
  }

  FrankWolfeResult result;
  result.coefficients.assign(nv, 0.0);
  result.coefficients[start] = 1.0;
  result.point = points[start];

  const auto rebuild_point = [&]() {
    std::fill(result.point.begin(), result.point.end(), 0.0);
    for (std::size_t v = 0; v < nv; ++v) {
      const double coeff = result.coefficients[v];
      if (coeff > 0.0) {
        for (std::size_t k = 0; k < d; ++k) result.point[k] += coeff * points[v][k];
      }
    }
  };

  for (int it = 0; it < max_iter; ++it) {
    result.iterations = it;
    const std::vector<double> grad = phi.gradient(result.point);

    std::size_t toward = 0;
    double toward_val = dot(grad, points[0]);
    for (std::size_t v = 1; v < nv; ++v) {
      const double val = dot(grad, points[v]);
      if (val < toward_val) {
        toward_val = val;
        toward = v;
      }
    }
    const double fw_gap = dot(grad, result.point) - toward_val;
    result.gap = fw_gap;
    if (fw_gap <= tol) break;

    std::size_t away = nv;
    double away_val = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (result.coefficients[v] > 0.0) {
        const double val = dot(grad, points[v]);
        if (away == nv || val > away_val) {
          away_val = val;
          away = v;
        }
      }
    }

    // Direction choice: regular step toward the minimizing vertex, or an
    // away step shrinking the worst active vertex. Away steps give linear
    // convergence for this strongly convex potential.
    std::vector<double> dir(d);
    double eta_max = 1.0;
    bool is_away = false;
    const double away_gap = away == nv ? 0.0 : away_val - dot(grad, result.point);
    if (away != nv && away_gap > fw_gap && result.coefficients[away] < 1.0) {
      is_away = true;
      for (std::size_t k = 0; k < d; ++k) dir[k] = result.point[k] - points[away][k];
      eta_max = result.coefficients[away] / (1.0 - result.coefficients[away]);
    } else {
      for (std::size_t k = 0; k < d; ++k) dir[k] = points[toward][k] - result.point[k];
    }

    double curvature = 0.0;
    for (std::size_t k = 0; k < d; ++k) curvature += phi.diag[k] * dir[k] * dir[k];
    if (curvature <= 0.0) break;
    const double eta = std::min(eta_max, -dot(grad, dir) / curvature);
    if (eta <= 0.0) break;

    if (is_away) {
      for (std::size_t v = 0; v < nv; ++v) result.coefficients[v] *= (1.0 + eta);
      result.coefficients[away] -= eta;
      if (result.coefficients[away] < 1e-15) result.coefficients[away] = 0.0;
    } else {
      for (std::size_t v = 0; v < nv; ++v) result.coefficients[v] *= (1.0 - eta);
      result.coefficients[toward] += eta;
    }
    for (std::size_t k = 0; k < d; ++k) result.point[k] += eta * dir[k];
    if ((it + 1) % 64 == 0) rebuild_point();  // contain float drift
  }

  rebuild_point();
  result.value = phi.value(result.point);
  {
    const std::vector<double> grad = phi.gradient(result.point);
    double toward_val = dot(grad, points[0]);
    for (std::size_t v = 1; v < nv; ++v) toward_val = std::min(toward_val, dot(grad, points[v]));
    result.gap = dot(grad, result.point) - toward_val;
  }
  return result;
}

}  // namespace iseo
