#include "iseo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace iseo {

double LinearSystem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < dim; ++j) {
    worst = std::max(worst, lo[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]);
    worst = std::max(worst, x[static_cast<std::size_t>(j)] - hi[static_cast<std::size_t>(j)]);
  }
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (int j = 0; j < dim; ++j) lhs += row.coeffs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    switch (row.sense) {
      case Sense::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Sense::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

constexpr double kPivotTol = 1e-9;

struct NormalizedRow {
  std::vector<double> a;
  double rhs = 0.0;
  Sense sense = Sense::LessEqual;
};

}  // namespace

namespace {

LpOptimum solve_two_phase(const LinearSystem& system, const std::vector<double>* objective) {
  const int d = system.dim;
  if (static_cast<int>(system.lo.size()) != d || static_cast<int>(system.hi.size()) != d) {
    throw std::invalid_argument("lp_feasible: box dimension mismatch");
  }
  for (const auto& row : system.rows) {
    if (static_cast<int>(row.coeffs.size()) != d) {
      throw std::invalid_argument("lp_feasible: row dimension mismatch");
    }
  }
  for (int j = 0; j < d; ++j) {
    if (!std::isfinite(system.lo[static_cast<std::size_t>(j)]) ||
        !std::isfinite(system.hi[static_cast<std::size_t>(j)])) {
      throw std::invalid_argument("lp_feasible: box bounds must be finite");
    }
    if (system.lo[static_cast<std::size_t>(j)] > system.hi[static_cast<std::size_t>(j)] + 1e-12) {
      return {};
    }
  }

  // Shift to y = x - lo, y in [0, u].
  std::vector<double> u(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    u[static_cast<std::size_t>(j)] = std::max(0.0, system.hi[static_cast<std::size_t>(j)] -
                                                       system.lo[static_cast<std::size_t>(j)]);
  }

  std::vector<NormalizedRow> normalized;
  for (const auto& row : system.rows) {
    NormalizedRow r;
    r.a = row.coeffs;
    r.sense = row.sense;
    r.rhs = row.rhs;
    for (int j = 0; j < d; ++j) r.rhs -= row.coeffs[static_cast<std::size_t>(j)] * system.lo[static_cast<std::size_t>(j)];
    double scale = 0.0;
    for (double c : r.a) scale = std::max(scale, std::abs(c));
    if (scale < kPivotTol) {
      // Row with no variables: either trivially satisfied or infeasible.
      const double lhs = 0.0;
      bool ok = true;
      switch (r.sense) {
        case Sense::LessEqual: ok = lhs <= r.rhs + 1e-9; break;
        case Sense::GreaterEqual: ok = lhs >= r.rhs - 1e-9; break;
        case Sense::Equal: ok = std::abs(lhs - r.rhs) <= 1e-9; break;
      }
      if (!ok) return {};
      continue;
    }
    for (double& c : r.a) c /= scale;
    r.rhs /= scale;
    normalized.push_back(std::move(r));
  }
  // Upper bounds as rows.
  for (int j = 0; j < d; ++j) {
    NormalizedRow r;
    r.a.assign(static_cast<std::size_t>(d), 0.0);
    r.a[static_cast<std::size_t>(j)] = 1.0;
    r.sense = Sense::LessEqual;
    r.rhs = u[static_cast<std::size_t>(j)];
    normalized.push_back(std::move(r));
  }

  // Ensure rhs >= 0.
  for (auto& r : normalized) {
    if (r.rhs < 0.0) {
      for (double& c : r.a) c = -c;
      r.rhs = -r.rhs;
      if (r.sense == Sense::LessEqual) {
        r.sense = Sense::GreaterEqual;
      } else if (r.sense == Sense::GreaterEqual) {
        r.sense = Sense::LessEqual;
      }
    }
  }

  const int nrows = static_cast<int>(normalized.size());
  int num_slack = 0, num_art = 0;
  for (const auto& r : normalized) {
    if (r.sense != Sense::Equal) ++num_slack;
    if (r.sense != Sense::LessEqual) ++num_art;
  }
  const int cols = d + num_slack + num_art;  // structural | slack/surplus | artificial
  const int art_begin = d + num_slack;

  std::vector<std::vector<double>> tab(static_cast<std::size_t>(nrows),
                                       std::vector<double>(static_cast<std::size_t>(cols + 1), 0.0));
  std::vector<int> basis(static_cast<std::size_t>(nrows), -1);

  int slack_at = d, art_at = art_begin;
  for (int r = 0; r < nrows; ++r) {
    auto& row = tab[static_cast<std::size_t>(r)];
    for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = normalized[static_cast<std::size_t>(r)].a[static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(cols)] = normalized[static_cast<std::size_t>(r)].rhs;
    switch (normalized[static_cast<std::size_t>(r)].sense) {
      case Sense::LessEqual:
        row[static_cast<std::size_t>(slack_at)] = 1.0;
        basis[static_cast<std::size_t>(r)] = slack_at++;
        break;
      case Sense::GreaterEqual:
        row[static_cast<std::size_t>(slack_at)] = -1.0;
        ++slack_at;
        row[static_cast<std::size_t>(art_at)] = 1.0;
        basis[static_cast<std::size_t>(r)] = art_at++;
        break;
      case Sense::Equal:
        row[static_cast<std::size_t>(art_at)] = 1.0;
        basis[static_cast<std::size_t>(r)] = art_at++;
        break;
    }
  }

  // Phase-I objective row: minimize the artificial sum. Price out the
  // artificial basics so every basic column has zero reduced cost.
  std::vector<double> obj(static_cast<std::size_t>(cols + 1), 0.0);
  for (int j = art_begin; j < cols; ++j) obj[static_cast<std::size_t>(j)] = 1.0;
  for (int r = 0; r < nrows; ++r) {
    if (basis[static_cast<std::size_t>(r)] >= art_begin) {
      for (int j = 0; j <= cols; ++j) obj[static_cast<std::size_t>(j)] -= tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
  }

  const long max_pivots = 2000L * (nrows + cols) + 10000L;
  for (long pivot = 0;; ++pivot) {
    if (pivot > max_pivots) throw std::runtime_error("lp_feasible: simplex stalled");
    // Bland: smallest index with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (obj[static_cast<std::size_t>(j)] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < nrows; ++r) {
      const double coef = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
      if (coef > kPivotTol) {
        const double ratio = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols)] / coef;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      // Phase-I objective is bounded below by zero, so an unbounded
      // direction cannot occur with exact arithmetic; treat as stalled.
      throw std::runtime_error("lp_feasible: unbounded phase-one direction");
    }
    auto& prow = tab[static_cast<std::size_t>(leave)];
    const double pv = prow[static_cast<std::size_t>(enter)];
    for (double& vv : prow) vv /= pv;
    for (int r = 0; r < nrows; ++r) {
      if (r == leave) continue;
      auto& row = tab[static_cast<std::size_t>(r)];
      const double f = row[static_cast<std::size_t>(enter)];
      if (f != 0.0) {
        for (int j = 0; j <= cols; ++j) row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
      }
    }
    const double f = obj[static_cast<std::size_t>(enter)];
    if (f != 0.0) {
      for (int j = 0; j <= cols; ++j) obj[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  double infeasibility = 0.0;
  for (int r = 0; r < nrows; ++r) {
    if (basis[static_cast<std::size_t>(r)] >= art_begin) {
      infeasibility += tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols)];
    }
  }
  if (infeasibility > 1e-9) return {};

  if (objective) {
    // Drive artificial basics out first (degenerate pivots); otherwise a
    // later pivot could drag a zero-valued artificial positive again. A row
    // with no real column left is redundant and can keep its artificial.
    for (int r = 0; r < nrows; ++r) {
      if (basis[static_cast<std::size_t>(r)] < art_begin) continue;
      int enter = -1;
      for (int j = 0; j < art_begin; ++j) {
        if (std::abs(tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) continue;
      auto& prow = tab[static_cast<std::size_t>(r)];
      const double pv = prow[static_cast<std::size_t>(enter)];
      for (double& vv : prow) vv /= pv;
      for (int rr = 0; rr < nrows; ++rr) {
        if (rr == r) continue;
        auto& row = tab[static_cast<std::size_t>(rr)];
        const double f = row[static_cast<std::size_t>(enter)];
        if (f != 0.0) {
          for (int j = 0; j <= cols; ++j) row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        }
      }
      basis[static_cast<std::size_t>(r)] = enter;
    }
    // Phase two: minimize the shifted objective c.y; artificial columns are
    // barred from entering.
    std::vector<double> obj2(static_cast<std::size_t>(cols + 1), 0.0);
    for (int j = 0; j < d; ++j) obj2[static_cast<std::size_t>(j)] = (*objective)[static_cast<std::size_t>(j)];
    for (int r = 0; r < nrows; ++r) {
      const int b = basis[static_cast<std::size_t>(r)];
      const double cb = obj2[static_cast<std::size_t>(b)];
      if (cb != 0.0) {
        for (int j = 0; j <= cols; ++j) obj2[static_cast<std::size_t>(j)] -= cb * tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        obj2[static_cast<std::size_t>(b)] = 0.0;
      }
    }
    for (long pivot = 0;; ++pivot) {
      if (pivot > max_pivots) throw std::runtime_error("lp_minimize: simplex stalled");
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (j >= art_begin) break;
        if (obj2[static_cast<std::size_t>(j)] < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) break;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < nrows; ++r) {
        const double coef = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
        if (coef > kPivotTol) {
          const double ratio = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols)] / coef;
          if (leave < 0 || ratio < best_ratio - 1e-12 ||
              (std::abs(ratio - best_ratio) <= 1e-12 &&
               basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) {
        // Finite boxes bound every direction; reaching here means numerics.
        throw std::runtime_error("lp_minimize: unbounded direction");
      }
      auto& prow = tab[static_cast<std::size_t>(leave)];
      const double pv = prow[static_cast<std::size_t>(enter)];
      for (double& vv : prow) vv /= pv;
      for (int r = 0; r < nrows; ++r) {
        if (r == leave) continue;
        auto& row = tab[static_cast<std::size_t>(r)];
        const double f = row[static_cast<std::size_t>(enter)];
        if (f != 0.0) {
          for (int j = 0; j <= cols; ++j) row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        }
      }
      const double f = obj2[static_cast<std::size_t>(enter)];
      if (f != 0.0) {
        for (int j = 0; j <= cols; ++j) obj2[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
      }
      basis[static_cast<std::size_t>(leave)] = enter;
    }
  }

  std::vector<double> x(system.lo);
  for (int r = 0; r < nrows; ++r) {
    const int b = basis[static_cast<std::size_t>(r)];
    if (b < d) {
      x[static_cast<std::size_t>(b)] += tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols)];
    }
  }
  for (int j = 0; j < d; ++j) {
    x[static_cast<std::size_t>(j)] = std::clamp(x[static_cast<std::size_t>(j)], system.lo[static_cast<std::size_t>(j)],
                                                system.hi[static_cast<std::size_t>(j)]);
  }
  if (system.max_violation(x) > 1e-9) {
    throw std::runtime_error("lp_feasible: returned point failed the row recheck");
  }
  LpOptimum out;
  out.feasible = true;
  out.x = std::move(x);
  if (objective) {
    out.value = 0.0;
    for (int j = 0; j < d; ++j) out.value += (*objective)[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

LpPoint lp_feasible(const LinearSystem& system) {
  LpOptimum r = solve_two_phase(system, nullptr);
  return {r.feasible, std::move(r.x)};
}

LpOptimum lp_minimize(const LinearSystem& system, const std::vector<double>& objective) {
  if (static_cast<int>(objective.size()) != system.dim) {
    throw std::invalid_argument("lp_minimize: objective dimension mismatch");
  }
  return solve_two_phase(system, &objective);
}

}  // namespace iseo
