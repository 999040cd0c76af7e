#include "iseo/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "iseo/lp.hpp"

namespace iseo {

namespace {

constexpr double kBigBound = 1e5;

struct Halfspace {
  Eigen::VectorXd g;
  double h = 0.0;
  bool equality = false;
};

// All constraints as g.x <= h (equalities flagged), box included.
std::vector<Halfspace> gather_constraints(const LinearSystem& system) {
  const int d = system.dim;
  std::vector<Halfspace> cons;
  for (const auto& row : system.rows) {
    Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(row.coeffs.data(), d);
    switch (row.sense) {
      case Sense::LessEqual: cons.push_back({g, row.rhs, false}); break;
      case Sense::GreaterEqual: cons.push_back({-g, -row.rhs, false}); break;
      case Sense::Equal: cons.push_back({g, row.rhs, true}); break;
    }
  }
  for (int j = 0; j < d; ++j) {
    if (std::isfinite(system.hi[static_cast<std::size_t>(j)])) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
      g(j) = 1.0;
      cons.push_back({g, system.hi[static_cast<std::size_t>(j)], false});
    }
    if (std::isfinite(system.lo[static_cast<std::size_t>(j)])) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
      g(j) = -1.0;
      cons.push_back({g, -system.lo[static_cast<std::size_t>(j)], false});
    }
  }
  return cons;
}

double quad_value(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(Q * x) + c.dot(x);
}

// Stationarity residual with multipliers estimated by least squares on the
// active constraints, negative multipliers clamped to zero.
double kkt_residual(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                    const std::vector<Halfspace>& cons, const Eigen::VectorXd& x) {
  const Eigen::VectorXd grad = Q * x + c;
  std::vector<int> active;
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const double slack = cons[k].h - cons[k].g.dot(x);
    if (cons[k].equality || std::abs(slack) <= 1e-7 * (1.0 + std::abs(cons[k].h))) {
      active.push_back(static_cast<int>(k));
    }
  }
  if (active.empty()) return grad.norm();
  Eigen::MatrixXd A(x.size(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    A.col(static_cast<Eigen::Index>(k)) = cons[static_cast<std::size_t>(active[k])].g;
  }
  Eigen::VectorXd lambda = A.completeOrthogonalDecomposition().solve(-grad);
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (!cons[static_cast<std::size_t>(active[k])].equality) {
      lambda(static_cast<Eigen::Index>(k)) = std::max(0.0, lambda(static_cast<Eigen::Index>(k)));
    }
  }
  return (grad + A * lambda).norm();
}

Eigen::VectorXd dykstra_project(const Eigen::VectorXd& point, const std::vector<Halfspace>& cons,
                                const LinearSystem& system) {
  const int d = system.dim;
  Eigen::VectorXd x = point;
  std::vector<Eigen::VectorXd> increments(cons.size() + 1, Eigen::VectorXd::Zero(d));
  for (int cycle = 0; cycle < 2000; ++cycle) {
    double moved = 0.0;
    // Box first.
    {
      Eigen::VectorXd y = x + increments[0];
      Eigen::VectorXd p = y;
      for (int j = 0; j < d; ++j) {
        p(j) = std::clamp(p(j), system.lo[static_cast<std::size_t>(j)], system.hi[static_cast<std::size_t>(j)]);
      }
      increments[0] = y - p;
      moved = std::max(moved, (p - x).lpNorm<Eigen::Infinity>());
      x = p;
    }
    for (std::size_t k = 0; k < cons.size(); ++k) {
      Eigen::VectorXd y = x + increments[k + 1];
      const double ng2 = cons[k].g.squaredNorm();
      Eigen::VectorXd p = y;
      if (ng2 > 0.0) {
        const double viol = cons[k].g.dot(y) - cons[k].h;
        if (cons[k].equality || viol > 0.0) p = y - (viol / ng2) * cons[k].g;
      }
      increments[k + 1] = y - p;
      moved = std::max(moved, (p - x).lpNorm<Eigen::Infinity>());
      x = p;
    }
    if (moved <= 1e-13 * (1.0 + x.lpNorm<Eigen::Infinity>())) break;
  }
  return x;
}

QpResult projected_gradient(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                            const LinearSystem& system, const std::vector<Halfspace>& cons,
                            int max_iterations) {
  const int d = system.dim;
  double lipschitz = 0.0;
  for (int r = 0; r < d; ++r) lipschitz = std::max(lipschitz, Q.row(r).cwiseAbs().sum());
  lipschitz = std::max(lipschitz, 1e-12);

  LinearSystem start_sys = system;
  for (int j = 0; j < d; ++j) {
    if (!std::isfinite(start_sys.lo[static_cast<std::size_t>(j)])) start_sys.lo[static_cast<std::size_t>(j)] = -kBigBound;
    if (!std::isfinite(start_sys.hi[static_cast<std::size_t>(j)])) start_sys.hi[static_cast<std::size_t>(j)] = kBigBound;
  }
  const LpPoint start = lp_feasible(start_sys);
  if (!start.feasible) {
    QpResult result;
    result.status = QpStatus::Infeasible;
    return result;
  }
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.x.data(), d);
  x = dykstra_project(x, cons, system);

  QpResult result;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd next = dykstra_project(x - (Q * x + c) / lipschitz, cons, system);
    const double moved = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    result.iterations = it + 1;
    if (moved <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>())) break;
  }
  result.x.assign(x.data(), x.data() + d);
  result.objective = quad_value(Q, c, x);
  result.kkt_residual = kkt_residual(Q, c, cons, x);
  result.status = result.iterations >= max_iterations ? QpStatus::IterationLimit : QpStatus::Optimal;
  return result;
}

// Primal active-set for convex QP. Keeps a working set of constraints held
// as equalities and moves to the nearest blocking constraint. Subproblems
// with a diagonal objective are solved through an exact saddle-point system
// that tolerates semidefinite directions (they are anchored at the current
// iterate when no working row pins them); dense objectives go through a
// Schur complement on a ridge-regularized inverse.
QpResult active_set(Eigen::MatrixXd Q, const Eigen::VectorXd& c, const LinearSystem& system,
                    const std::vector<Halfspace>& cons, int max_iterations,
                    const std::vector<double>* supplied_start) {
  const int d = system.dim;
  QpResult result;

  Eigen::VectorXd x;
  bool have_start = false;
  if (supplied_start && static_cast<int>(supplied_start->size()) == d) {
    Eigen::VectorXd candidate = Eigen::Map<const Eigen::VectorXd>(supplied_start->data(), d);
    double worst = 0.0;
    for (const auto& con : cons) {
      const double v = con.g.dot(candidate) - con.h;
      worst = std::max(worst, con.equality ? std::abs(v) : v);
    }
    if (worst <= 1e-7 * (1.0 + candidate.lpNorm<Eigen::Infinity>())) {
      x = candidate;
      have_start = true;
    }
  }
  if (!have_start) {
    // Phase-one LP on a clamped copy of the box.
    LinearSystem start_sys = system;
    for (int j = 0; j < d; ++j) {
      if (!std::isfinite(start_sys.lo[static_cast<std::size_t>(j)])) start_sys.lo[static_cast<std::size_t>(j)] = -kBigBound;
      if (!std::isfinite(start_sys.hi[static_cast<std::size_t>(j)])) start_sys.hi[static_cast<std::size_t>(j)] = kBigBound;
    }
    LpPoint start = lp_feasible(start_sys);
    if (!start.feasible) {
      result.status = QpStatus::Infeasible;
      return result;
    }
    x = Eigen::Map<const Eigen::VectorXd>(start.x.data(), d);
  }

  bool diagonal = true;
  for (int r = 0; r < d && diagonal; ++r) {
    for (int s = 0; s < d && diagonal; ++s) {
      if (r != s && Q(r, s) != 0.0) diagonal = false;
    }
  }
  std::vector<int> positive_coords, null_coords;
  if (diagonal) {
    for (int k = 0; k < d; ++k) {
      (Q(k, k) > 1e-12 ? positive_coords : null_coords).push_back(k);
    }
  } else if (Q.diagonal().minCoeff() < 1e-10) {
    const double ridge = 1e-10 * (1.0 + Q.trace() / d);
    for (int r = 0; r < d; ++r) Q(r, r) += ridge;
  }
  Eigen::LDLT<Eigen::MatrixXd> qinv;
  if (!diagonal) qinv.compute(Q);

  std::vector<int> working;
  for (std::size_t k = 0; k < cons.size(); ++k) {
    if (cons[k].equality) working.push_back(static_cast<int>(k));
  }

  // min 0.5 x'Qx + c'x s.t. Gx = h. Coordinates with zero curvature and no
  // working row keep their current value.
  const auto solve_eqp = [&](const std::vector<int>& w, Eigen::VectorXd& x_out,
                             Eigen::VectorXd& lambda_out) {
    const Eigen::Index nw = static_cast<Eigen::Index>(w.size());
    Eigen::MatrixXd G(nw, d);
    Eigen::VectorXd h(nw);
    for (Eigen::Index k = 0; k < nw; ++k) {
      G.row(k) = cons[static_cast<std::size_t>(w[static_cast<std::size_t>(k)])].g.transpose();
      h(k) = cons[static_cast<std::size_t>(w[static_cast<std::size_t>(k)])].h;
    }
    if (diagonal) {
      const Eigen::Index np = static_cast<Eigen::Index>(positive_coords.size());
      const Eigen::Index nn = static_cast<Eigen::Index>(null_coords.size());
      Eigen::MatrixXd Gp(nw, np), Gn(nw, nn);
      Eigen::VectorXd cp(np), cn(nn), qp(np);
      for (Eigen::Index k = 0; k < np; ++k) {
        Gp.col(k) = G.col(positive_coords[static_cast<std::size_t>(k)]);
        cp(k) = c(positive_coords[static_cast<std::size_t>(k)]);
        qp(k) = Q(positive_coords[static_cast<std::size_t>(k)], positive_coords[static_cast<std::size_t>(k)]);
      }
      for (Eigen::Index k = 0; k < nn; ++k) {
        Gn.col(k) = G.col(null_coords[static_cast<std::size_t>(k)]);
        cn(k) = c(null_coords[static_cast<std::size_t>(k)]);
      }
      Eigen::MatrixXd M(nw + nn, nw + nn);
      Eigen::VectorXd rhs(nw + nn);
      const Eigen::MatrixXd GpQi = Gp * qp.cwiseInverse().asDiagonal();
      M.topLeftCorner(nw, nw) = -GpQi * Gp.transpose();
      M.topRightCorner(nw, nn) = Gn;
      M.bottomLeftCorner(nn, nw) = Gn.transpose();
      M.bottomRightCorner(nn, nn).setZero();
      rhs.head(nw) = h + GpQi * cp;
      rhs.tail(nn) = -cn;
      const Eigen::VectorXd sol = M.completeOrthogonalDecomposition().solve(rhs);
      lambda_out = sol.head(nw);
      x_out.resize(d);
      const Eigen::VectorXd gtl = Gp.transpose() * lambda_out;
      for (Eigen::Index k = 0; k < np; ++k) {
        x_out(positive_coords[static_cast<std::size_t>(k)]) = -(cp(k) + gtl(k)) / qp(k);
      }
      for (Eigen::Index k = 0; k < nn; ++k) {
        const int coord = null_coords[static_cast<std::size_t>(k)];
        // Unpinned flat direction: stay where we are.
        x_out(coord) = Gn.col(k).norm() <= 1e-12 ? x(coord) : sol(nw + k);
      }
      return;
    }
    if (w.empty()) {
      x_out = qinv.solve(-c);
      lambda_out.resize(0);
      return;
    }
    const Eigen::MatrixXd QiGt = qinv.solve(G.transpose());
    const Eigen::VectorXd Qic = qinv.solve(c);
    const Eigen::MatrixXd S = G * QiGt;
    lambda_out = S.completeOrthogonalDecomposition().solve(-(h + G * Qic));
    x_out = -(Qic + QiGt * lambda_out);
  };

  int zero_steps = 0;
  for (int it = 0; it < max_iterations; ++it) {
    result.iterations = it + 1;
    Eigen::VectorXd x_eqp, lambda;
    solve_eqp(working, x_eqp, lambda);
    const Eigen::VectorXd p = x_eqp - x;

    if (p.lpNorm<Eigen::Infinity>() <= 1e-11 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      // Stationary on the working set; check multiplier signs. After
      // repeated degenerate steps fall back to the lowest-index drop rule.
      const double tol = 1e-7 * (1.0 + (lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0));
      int drop = -1;
      double most_negative = -tol;
      for (std::size_t k = 0; k < working.size(); ++k) {
        if (cons[static_cast<std::size_t>(working[k])].equality) continue;
        const double lk = lambda(static_cast<Eigen::Index>(k));
        if (lk < most_negative) {
          most_negative = lk;
          drop = static_cast<int>(k);
          if (zero_steps > 2 * static_cast<int>(cons.size())) break;  // first negative wins
        }
      }
      if (drop < 0) {
        result.status = QpStatus::Optimal;
        break;
      }
      working.erase(working.begin() + drop);
      continue;
    }

    // Step toward the subproblem optimum until a constraint blocks.
    double alpha = 1.0;
    int blocking = -1;
    for (std::size_t k = 0; k < cons.size(); ++k) {
      if (std::find(working.begin(), working.end(), static_cast<int>(k)) != working.end()) continue;
      const double gp = cons[k].g.dot(p);
      if (gp > 1e-12) {
        const double slack = cons[k].h - cons[k].g.dot(x);
        const double a = std::max(0.0, slack) / gp;
        if (a < alpha - 1e-15) {
          alpha = a;
          blocking = static_cast<int>(k);
        }
      }
    }
    zero_steps = alpha <= 1e-13 ? zero_steps + 1 : 0;
    if (zero_steps > 4 * static_cast<int>(cons.size()) + 20) {
      break;  // degenerate stall; report the best iterate
    }
    x += alpha * p;
    if (blocking >= 0) {
      working.push_back(blocking);
    }
  }

  if (result.status != QpStatus::Optimal) result.status = QpStatus::IterationLimit;
  result.x.assign(x.data(), x.data() + d);
  result.objective = quad_value(Q, c, x);
  result.kkt_residual = kkt_residual(Q, c, cons, x);
  return result;
}

}  // namespace

QpResult solve_box_qp(const std::vector<std::vector<double>>& Q, const std::vector<double>& c,
                      const LinearSystem& system, int max_iterations,
                      const std::vector<double>* start) {
  const int d = system.dim;
  if (static_cast<int>(Q.size()) != d || static_cast<int>(c.size()) != d) {
    throw std::invalid_argument("solve_box_qp: objective dimension mismatch");
  }
  Eigen::MatrixXd Qm(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(Q[static_cast<std::size_t>(r)].size()) != d) {
      throw std::invalid_argument("solve_box_qp: objective dimension mismatch");
    }
    for (int s = 0; s < d; ++s) Qm(r, s) = Q[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
  }
  const Eigen::VectorXd cv = Eigen::Map<const Eigen::VectorXd>(c.data(), d);
  const std::vector<Halfspace> cons = gather_constraints(system);

  double min_diag = std::numeric_limits<double>::infinity();
  for (int r = 0; r < d; ++r) min_diag = std::min(min_diag, Qm(r, r));
  const bool few_rows = system.rows.size() <= 8;
  if (few_rows && min_diag >= 1e-6) {
    return projected_gradient(Qm, cv, system, cons, max_iterations);
  }
  return active_set(std::move(Qm), cv, system, cons, max_iterations, start);
}

}  // namespace iseo
