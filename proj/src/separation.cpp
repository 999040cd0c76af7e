#include "iseo/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iseo/frank_wolfe.hpp"
#include "iseo/linear_system.hpp"
#include "iseo/pools.hpp"
#include "iseo/lp.hpp"
#include "iseo/qp.hpp"

namespace iseo {

double dual_norm(const std::vector<double>& a, double b, double radius) {
  double s = b * b;
  for (double v : a) s += radius * radius * v * v;
  return std::sqrt(0.5 * s);
}

ScaledInequality normalize_inequality(const std::vector<double>& a, double b, double radius) {
  const double norm = dual_norm(a, b, radius);
  if (norm < 1e-12) throw std::invalid_argument("normalize_inequality: zero inequality");
  ScaledInequality out;
  out.a.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.a[j] = a[j] / norm;
  out.b = b / norm;
  return out;
}

namespace {

int count_misclassified(const std::vector<double>& w, const std::vector<Bits>& pos,
                        const std::vector<Bits>& neg) {
  int bad = 0;
  for (const auto& p : pos) {
    if (p.dot(w) > 1.0 + 1e-9) ++bad;
  }
  for (const auto& m : neg) {
    if (m.dot(w) < 1.0 - 1e-9) ++bad;
  }
  return bad;
}

/// Clamp to the unit box, then project onto the extra domain cuts when any
/// is violated.
std::vector<double> into_domain(std::vector<double> w, const WeightDomain& domain,
                                SeparationDiagnostics* diagnostics) {
  bool clamped = false;
  for (double& v : w) {
    const double before = v;
    v = std::clamp(v, 0.0, 1.0);
    clamped = clamped || v != before;
  }
  bool cut_violated = false;
  for (const auto& cut : domain.cuts) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) lhs += cut.a[j] * w[j];
    if (lhs > cut.b + 1e-9) cut_violated = true;
  }
  if (cut_violated) {
    const int n = static_cast<int>(w.size());
    LinearSystem sys = LinearSystem::box(n, 0.0, 1.0);
    for (const auto& cut : domain.cuts) sys.add_row(cut.a, Sense::LessEqual, cut.b);
    std::vector<std::vector<double>> Q(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      Q[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 2.0;
      c[static_cast<std::size_t>(j)] = -2.0 * w[static_cast<std::size_t>(j)];
    }
    const QpResult proj = solve_box_qp(Q, c, sys);
    if (proj.status != QpStatus::Infeasible) w = proj.x;
  }
  if (diagnostics) diagnostics->projected = diagnostics->projected || clamped || cut_violated;
  return w;
}

}  // namespace

std::vector<double> svm_separate(const WeightDomain& domain, const std::vector<Bits>& pos,
                                 const std::vector<Bits>& neg,
                                 SeparationDiagnostics* diagnostics) {
  if (pos.empty() && neg.empty()) throw SeparationError("svm_separate: empty pools");
  const int n = pos.empty() ? neg.front().n : pos.front().n;
  const int d = n + 1;  // (omega, beta)

  // Dominated positives and dominating negatives add only implied rows.
  const std::vector<Bits> pos_max = maximal_elements(pos);
  const std::vector<Bits> neg_min = minimal_elements(neg);

  const double inf = std::numeric_limits<double>::infinity();
  LinearSystem sys = LinearSystem::box(d, 0.0, inf);
  sys.lo[static_cast<std::size_t>(n)] = -inf;
  for (const auto& sp : pos_max) {
    std::vector<double> row(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = sp.get(j) ? 1.0 : 0.0;
    row[static_cast<std::size_t>(n)] = -1.0;
    sys.add_row(std::move(row), Sense::LessEqual, -1.0);  // w.s+ - beta <= -1
  }
  for (const auto& sm : neg_min) {
    std::vector<double> row(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = sm.get(j) ? -1.0 : 0.0;
    row[static_cast<std::size_t>(n)] = 1.0;
    sys.add_row(std::move(row), Sense::LessEqual, -1.0);  // beta - w.s- <= -1
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> row(static_cast<std::size_t>(d), 0.0);
    row[static_cast<std::size_t>(j)] = 1.0;
    row[static_cast<std::size_t>(n)] = -1.0;
    sys.add_row(std::move(row), Sense::LessEqual, 0.0);  // w_j <= beta
  }

  // Feasible start from the homogenized system (omega, beta, s) in [0,1]:
  // margins shrink to s, and (omega, beta)/s solves the original rows. The
  // scaled system keeps every simplex quantity O(1). Larger s gives a
  // smaller start, so try generous floors first; pools with a margin below
  // the last floor are reported inseparable.
  std::vector<double> start;
  {
    LinearSystem homo = LinearSystem::box(d + 1, 0.0, 1.0);
    for (const auto& sp : pos_max) {
      std::vector<double> row(static_cast<std::size_t>(d + 1), 0.0);
      for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = sp.get(j) ? 1.0 : 0.0;
      row[static_cast<std::size_t>(n)] = -1.0;
      row[static_cast<std::size_t>(d)] = 1.0;
      homo.add_row(std::move(row), Sense::LessEqual, 0.0);
    }
    for (const auto& sm : neg_min) {
      std::vector<double> row(static_cast<std::size_t>(d + 1), 0.0);
      for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = sm.get(j) ? -1.0 : 0.0;
      row[static_cast<std::size_t>(n)] = 1.0;
      row[static_cast<std::size_t>(d)] = 1.0;
      homo.add_row(std::move(row), Sense::LessEqual, 0.0);
    }
    for (int j = 0; j < n; ++j) {
      std::vector<double> row(static_cast<std::size_t>(d + 1), 0.0);
      row[static_cast<std::size_t>(j)] = 1.0;
      row[static_cast<std::size_t>(n)] = -1.0;
      homo.add_row(std::move(row), Sense::LessEqual, 0.0);
    }
    for (double floor : {0.25, 1e-2, 1e-4, 1e-6, 1e-9}) {
      homo.lo[static_cast<std::size_t>(d)] = floor;
      const LpPoint point = lp_feasible(homo);
      if (point.feasible) {
        const double s = point.x[static_cast<std::size_t>(d)];
        start.resize(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) start[static_cast<std::size_t>(k)] = point.x[static_cast<std::size_t>(k)] / s;
        break;
      }
    }
    if (start.empty()) {
      throw SeparationError("svm_separate: pools are not linearly separable (corrupted labels?)");
    }
  }

  // Strictly convex in omega, flat in beta; the QP anchors the flat
  // direction and the closed form below restores the smallest optimal beta.
  std::vector<std::vector<double>> Q(static_cast<std::size_t>(d),
                                     std::vector<double>(static_cast<std::size_t>(d), 0.0));
  std::vector<double> c(static_cast<std::size_t>(d), 0.0);
  for (int j = 0; j < n; ++j) Q[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 2.0;

  const QpResult qp = solve_box_qp(Q, c, sys, 10000, &start);
  if (qp.status == QpStatus::Infeasible) {
    throw SeparationError("svm_separate: pools are not linearly separable (corrupted labels?)");
  }
  if (qp.status == QpStatus::IterationLimit && sys.max_violation(qp.x) > 1e-7) {
    throw SeparationError("svm_separate: QP did not converge to a feasible point");
  }

  std::vector<double> omega(qp.x.begin(), qp.x.begin() + n);
  // Smallest beta feasible for this omega; with 0 in S+ it is at least 1.
  double beta = 1.0;
  for (int j = 0; j < n; ++j) beta = std::max(beta, omega[static_cast<std::size_t>(j)]);
  for (const auto& sp : pos_max) beta = std::max(beta, sp.dot(omega) + 1.0);

  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = omega[static_cast<std::size_t>(j)] / beta;

  w = into_domain(std::move(w), domain, diagnostics);
  if (diagnostics) diagnostics->misclassified = count_misclassified(w, pos, neg);
  return w;
}

std::vector<double> sep_separate(const WeightDomain& domain, const std::vector<Bits>& pos,
                                 const std::vector<Bits>& neg, int n,
                                 const std::vector<double>& previous_w,
                                 SeparationDiagnostics* diagnostics) {
  const double radius = std::sqrt(static_cast<double>(n));  // diameter of [0,1]^n
  std::vector<std::vector<double>> lambda;

  const auto push = [&](const std::vector<double>& a, double b) {
    const ScaledInequality s = normalize_inequality(a, b, radius);
    std::vector<double> v = s.a;
    v.push_back(s.b);
    lambda.push_back(std::move(v));
  };

  // The collected inequalities describe the version space, including
  // everything that defines the weight domain: the unit box and the
  // extra cuts. Without the box rows the hull degenerates on wide version
  // spaces and the gradient ratio overshoots.
  std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    unit[static_cast<std::size_t>(j)] = 1.0;
    push(unit, 1.0);  // w_j <= 1
    unit[static_cast<std::size_t>(j)] = -1.0;
    push(unit, 0.0);  // -w_j <= 0
    unit[static_cast<std::size_t>(j)] = 0.0;
  }
  for (const auto& cut : domain.cuts) push(cut.a, cut.b);
  std::vector<double> buffer(static_cast<std::size_t>(n), 0.0);
  for (const auto& sp : pos) {
    for (int j = 0; j < n; ++j) buffer[static_cast<std::size_t>(j)] = sp.get(j) ? 1.0 : 0.0;
    push(buffer, 1.0);
  }
  for (const auto& sm : neg) {
    for (int j = 0; j < n; ++j) buffer[static_cast<std::size_t>(j)] = sm.get(j) ? -1.0 : 0.0;
    push(buffer, -1.0);
  }

  const auto fallback = [&]() {
    if (diagnostics) diagnostics->degenerate_fallback = true;
    std::vector<double> w = previous_w;
    if (static_cast<int>(w.size()) != n) w.assign(static_cast<std::size_t>(n), 0.0);
    w = into_domain(std::move(w), domain, nullptr);
    if (diagnostics) diagnostics->misclassified = count_misclassified(w, pos, neg);
    return w;
  };

  if (lambda.empty()) return fallback();

  DiagonalQuadratic phi;
  phi.diag.assign(static_cast<std::size_t>(n + 1), 0.5 * radius * radius);
  phi.diag[static_cast<std::size_t>(n)] = 0.5;  // Phi = 0.25 ||(R a, b)||^2

  const FrankWolfeResult fw = frank_wolfe(lambda, phi);
  const std::vector<double> grad = phi.gradient(fw.point);
  const double denom = grad[static_cast<std::size_t>(n)];
  if (std::abs(denom) < 1e-10) return fallback();

  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = -grad[static_cast<std::size_t>(j)] / denom;
  w = into_domain(std::move(w), domain, diagnostics);
  if (diagnostics) diagnostics->misclassified = count_misclassified(w, pos, neg);
  return w;
}

}  // namespace iseo
