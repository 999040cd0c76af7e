#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iseo/pools.hpp"
#include "iseo/separation.hpp"

using namespace iseo;

namespace {

std::vector<Bits> points(std::initializer_list<std::vector<int>> list) {
  std::vector<Bits> v;
  for (const auto& p : list) v.push_back(Bits::from_vector(p));
  return v;
}

// Test-local exact minimizer of Phi over conv(vertices): enumerate support
// subsets and solve the equality-KKT system by Gaussian elimination. Fully
// independent of the production Frank-Wolfe path.
struct HullOptimum {
  std::vector<double> point;
  double value = 0.0;
};

HullOptimum hull_minimize(const std::vector<std::vector<double>>& vertices,
                          const std::vector<double>& hdiag) {
  const std::size_t d = hdiag.size();
  const std::size_t nv = vertices.size();
  const auto phi = [&](const std::vector<double>& g) {
    double v = 0.0;
    for (std::size_t k = 0; k < d; ++k) v += hdiag[k] * g[k] * g[k];
    return 0.5 * v;
  };
  HullOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << nv); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t v = 0; v < nv; ++v) {
      if ((mask >> v) & 1u) support.push_back(v);
    }
    const std::size_t k = support.size();
    // Stationarity over the affine hull of the support plus the simplex row.
    std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t r = 0; r + 1 < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        double entry = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
          entry += (vertices[support[r + 1]][t] - vertices[support[0]][t]) * hdiag[t] *
                   vertices[support[c]][t];
        }
        A[r][c] = entry;
      }
    }
    for (std::size_t c = 0; c < k; ++c) A[k - 1][c] = 1.0;
    A[k - 1][k] = 1.0;
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (std::size_t col = 0; col < k && !singular; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < k; ++r) {
        if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
      }
      if (std::abs(A[pivot][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(A[col], A[pivot]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == col) continue;
        const double f = A[r][col] / A[col][col];
        for (std::size_t c = col; c <= k; ++c) A[r][c] -= f * A[col][c];
      }
    }
    if (singular) continue;
    std::vector<double> theta(k);
    bool ok = true;
    for (std::size_t r = 0; r < k; ++r) {
      theta[r] = A[r][k] / A[r][r];
      if (theta[r] < -1e-9) ok = false;
    }
    if (!ok) continue;
    std::vector<double> g(d, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t t = 0; t < d; ++t) g[t] += theta[c] * vertices[support[c]][t];
    }
    const double value = phi(g);
    if (value < best.value) {
      best.value = value;
      best.point = g;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("dual norm and normalization") {
  // ||(a,b)||_* = sqrt((R^2 |a|^2 + b^2)/2); members of the hull normalize
  // to unit dual norm.
  const double R = std::sqrt(2.0);
  CHECK(dual_norm({0.0, 0.0}, 1.0, R) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(dual_norm({-1.0, -1.0}, -1.0, R) == doctest::Approx(std::sqrt(2.5)));
  const auto s = normalize_inequality({-1.0, -1.0}, -1.0, R);
  CHECK(dual_norm(s.a, s.b, R) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.a[0] == doctest::Approx(-std::sqrt(0.4)));
  CHECK_THROWS(normalize_inequality({0.0}, 0.0, 1.0));
}

TEST_CASE("svm separation on the worked pools") {
  WeightDomain box;
  {
    // S+={(0,0)}, S-={(1,1)}: omega*=(1,1), beta*=1, w=(1,1).
    const auto w = svm_separate(box, points({{0, 0}}), points({{1, 1}}));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    // S+={(0,)}, S-=empty: unconstrained minimum omega*=0.
    const auto w = svm_separate(box, points({{0}}), {});
    CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-7));
  }
  {
    // S+={(0,0),(1,0)}, S-={(1,1)}: verified post-hoc.
    const auto w = svm_separate(box, points({{0, 0}, {1, 0}}), points({{1, 1}}));
    CHECK(w[0] <= 1.0 + 1e-9);
    CHECK(w[0] + w[1] >= 1.0 - 1e-9);
  }
  // Non-separable pools signal corrupted labels.
  CHECK_THROWS_AS(svm_separate(box, points({{1, 1}}), points({{1, 0}})), SeparationError);
}

TEST_CASE("svm separation margin property on random true-knapsack pools") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightDomain box;
  int nontrivial = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<double> truth(static_cast<std::size_t>(n));
    for (double& v : truth) v = 0.3 + 0.7 * unit(rng);
    std::vector<Bits> pos{Bits::zeros(n)}, neg;
    for (int k = 0; k < 8; ++k) {
      Bits mu(n);
      for (int j = 0; j < n; ++j) mu.set(j, rng() % 2 == 0);
      (mu.dot(truth) <= 1.0 ? pos : neg).push_back(mu);
    }
    SeparationDiagnostics diag;
    const auto w = svm_separate(box, pos, neg, &diag);
    CHECK(diag.misclassified == 0);
    double worst_pos = 0.0, best_neg = 10.0;
    for (const auto& p : pos) worst_pos = std::max(worst_pos, p.dot(w));
    for (const auto& m : neg) best_neg = std::min(best_neg, m.dot(w));
    CHECK(worst_pos < 1.0 - 1e-7);
    if (!neg.empty()) {
      CHECK(best_neg > 1.0 + 1e-7);
      ++nontrivial;
    }
    for (double v : w) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1.0 + 1e-9);
    }
  }
  CHECK(nontrivial > 50);
}

TEST_CASE("svm output confirmed by grid search") {
  // Local 1e-3 grid around the QP answer plus a coarse global sweep: no
  // feasible grid point does better than the QP (up to grid resolution).
  WeightDomain box;
  const auto cases = std::vector<std::pair<std::vector<Bits>, std::vector<Bits>>>{
      {points({{0, 0}}), points({{1, 1}})},
      {points({{0, 0}, {1, 0}}), points({{1, 1}})},
      {points({{0, 0}, {0, 1}}), points({{1, 1}})},
  };
  for (const auto& [pos, neg] : cases) {
    const int n = pos.front().n;
    const auto w = svm_separate(box, pos, neg);
    // Recover (omega, beta): beta is the smallest feasible for omega = w*beta.
    // Grid in (omega, beta) space instead: feasibility check helper.
    const auto feasible = [&](const std::vector<double>& omega, double beta) {
      for (const auto& p : pos) {
        if (beta - p.dot(omega) < 1.0 - 1e-12) return false;
      }
      for (const auto& m : neg) {
        if (beta - m.dot(omega) > -1.0 + 1e-12) return false;
      }
      for (double v : omega) {
        if (v < 0.0 || v > beta) return false;
      }
      return true;
    };
    const auto norm2 = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x * x;
      return s;
    };
    double best_grid = std::numeric_limits<double>::infinity();
    // Coarse global sweep over [0,3]^n x [1,4].
    const double coarse = 0.05;
    std::vector<double> omega(static_cast<std::size_t>(n), 0.0);
    const int steps = static_cast<int>(3.0 / coarse);
    const int bsteps = static_cast<int>(3.0 / coarse);
    const auto sweep = [&](auto&& self, int j) -> void {
      if (j == n) {
        for (int bk = 0; bk <= bsteps; ++bk) {
          const double beta = 1.0 + bk * coarse;
          if (feasible(omega, beta)) best_grid = std::min(best_grid, norm2(omega));
        }
        return;
      }
      for (int k = 0; k <= steps; ++k) {
        omega[static_cast<std::size_t>(j)] = k * coarse;
        self(self, j + 1);
      }
    };
    sweep(sweep, 0);
    REQUIRE(best_grid < std::numeric_limits<double>::infinity());

    // QP objective (recover omega from w and its smallest beta).
    double beta = 1.0;
    // w = omega/beta and omega = w*beta: search beta on the fine grid too.
    double best_qp = std::numeric_limits<double>::infinity();
    for (int bk = 0; bk <= 3000; ++bk) {
      const double b = 1.0 + bk * 1e-3;
      std::vector<double> omega_b(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) omega_b[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * b;
      if (feasible(omega_b, b)) {
        best_qp = std::min(best_qp, norm2(omega_b));
      }
    }
    (void)beta;
    REQUIRE(best_qp < std::numeric_limits<double>::infinity());
    // The QP solution is at least as good as the best grid point (up to the
    // grid step) and never beats it by more than numerical tolerance.
    CHECK(best_qp <= best_grid + 1e-6);
    CHECK(best_grid <= best_qp + 1e-3 * (1.0 + best_grid) + coarse * coarse * n);
  }
}

TEST_CASE("sep separation reproduces the hull optimum") {
  WeightDomain box;
  SeparationDiagnostics diag;
  const auto w = sep_separate(box, points({{0, 0}}), points({{1, 1}}), 2, {}, &diag);

  // Independent oracle: exact minimization over the same normalized hull.
  const double R = std::sqrt(2.0);
  std::vector<std::vector<double>> hull;
  const auto add = [&](std::vector<double> a, double b) {
    const auto s = normalize_inequality(a, b, R);
    std::vector<double> v = s.a;
    v.push_back(s.b);
    hull.push_back(v);
  };
  add({1.0, 0.0}, 1.0);
  add({0.0, 1.0}, 1.0);
  add({-1.0, 0.0}, 0.0);
  add({0.0, -1.0}, 0.0);
  add({0.0, 0.0}, 1.0);
  add({-1.0, -1.0}, -1.0);
  const auto opt = hull_minimize(hull, {1.0, 1.0, 0.5});
  REQUIRE(!opt.point.empty());
  const double denom = 0.5 * opt.point[2];
  const std::vector<double> expected{-opt.point[0] / denom, -opt.point[1] / denom};

  CHECK(w[0] == doctest::Approx(expected[0]).epsilon(1e-4));
  CHECK(w[1] == doctest::Approx(expected[1]).epsilon(1e-4));
  // Frozen value of the independent computation.
  CHECK(expected[0] == doctest::Approx(0.6961405).epsilon(1e-5));
  // The output happens to separate this state.
  CHECK(w[0] * 0.0 + w[1] * 0.0 <= 1.0);
  CHECK(w[0] + w[1] >= 1.0);
  CHECK(diag.misclassified == 0);
  CHECK_FALSE(diag.degenerate_fallback);
}

TEST_CASE("sep with positives only gives the symmetric prior weights") {
  // With the domain box in the hull, the zero-only positive pool maps to a
  // symmetric interior point; for n=3 the exact value is 2*sqrt(3)-3.
  WeightDomain box;
  const auto w = sep_separate(box, points({{0, 0, 0}}), {}, 3, {});
  for (double v : w) CHECK(v == doctest::Approx(2.0 * std::sqrt(3.0) - 3.0).epsilon(1e-5));
}

TEST_CASE("sep output stays in the domain") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightDomain box;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<double> truth(static_cast<std::size_t>(n));
    for (double& v : truth) v = unit(rng);
    std::vector<Bits> pos{Bits::zeros(n)}, neg;
    for (int k = 0; k < 10; ++k) {
      Bits mu(n);
      for (int j = 0; j < n; ++j) mu.set(j, rng() % 2 == 0);
      (mu.dot(truth) <= 1.0 ? pos : neg).push_back(mu);
    }
    const auto w = sep_separate(box, pos, neg, n, {});
    for (double v : w) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("domain cuts are honored by projection") {
  WeightDomain constrained;
  constrained.cuts.push_back({{1.0, 1.0}, 0.5});  // w1 + w2 <= 0.5
  SeparationDiagnostics diag;
  const auto w = svm_separate(constrained, points({{0, 0}}), points({{1, 1}}), &diag);
  CHECK(w[0] + w[1] <= 0.5 + 1e-6);
  CHECK(diag.projected);
}
