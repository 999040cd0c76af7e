#include "iseo/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iseo/separation.hpp"

namespace iseo {

using nlohmann::json;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(Separator s) { return s == Separator::Svm ? "svm" : "sep"; }
std::string to_string(Sampler s) { return s == Sampler::Sim ? "sim" : "cut"; }

Separator separator_from_string(const std::string& s) {
  if (s == "svm") return Separator::Svm;
  if (s == "sep") return Separator::Sep;
  throw std::invalid_argument("unknown separator: " + s);
}

Sampler sampler_from_string(const std::string& s) {
  if (s == "sim") return Sampler::Sim;
  if (s == "cut") return Sampler::Cut;
  throw std::invalid_argument("unknown sampler: " + s);
}

std::function<double()> virtual_clock(double step_s) {
  auto counter = std::make_shared<double>(0.0);
  return [counter, step_s]() {
    *counter += step_s;
    return *counter;
  };
}

double relative_gap(double lb, double ub) {
  if (lb <= 0.0 || !std::isfinite(ub)) return kInf;
  return (ub - lb) / lb;
}

namespace {

std::function<double()> steady_clock_fn() {
  return []() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  };
}

struct Labeled {
  int constraint;
  Bits point;
  int label;
};

}  // namespace

RunRecord run(const Instance& instance, OracleSuite& oracles, const RunConfig& config) {
  instance.validate();
  if (oracles.num_oracles() != instance.m) {
    throw std::invalid_argument("run: oracle suite size mismatch");
  }
  const int m = instance.m, n = instance.n;
  const auto clock = config.clock ? config.clock : steady_clock_fn();
  const double start_time = clock();

  RunRecord record;
  LabeledPools pools(m, n);

  // S+(0) = {0}, S-(0) = {1}; the all-ones solution is split per constraint
  // with one initializing query each, charged as |S-(0)| per oracle.
  const Solution zero = Solution::zeros(m, n);
  const Solution ones = Solution::ones(m, n);
  pools.add_global_pos(zero, 0);
  pools.add_global_neg(ones, 0);
  for (int i = 0; i < m; ++i) {
    pools.add_pos(i, restrict_to(zero, i), 0);
    const int label = oracles.query_uncounted(i, restrict_to(ones, i));
    if (label > 0) {
      pools.add_pos(i, restrict_to(ones, i), 0);
    } else {
      pools.add_neg(i, restrict_to(ones, i), 0);
    }
    oracles.add_initial_calls(i, 1);
  }

  double lb = 0.0;  // z(0)
  double ub = kInf;
  bool flag = true;
  int t = 0;
  std::vector<char> sampler_alive(static_cast<std::size_t>(m), 1);
  SurrogateWeights weights(m, n);
  BoundingMemory bounding_memory;

  std::vector<std::vector<LinearRow>> block_rows(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) block_rows[static_cast<std::size_t>(i)] = instance.space.block_rows(m, n, i);

  const auto separate_one = [&](int i, const std::vector<Bits>& pos, const std::vector<Bits>& neg) {
    SeparationDiagnostics diag;
    std::vector<double> w;
    if (config.separator == Separator::Svm) {
      w = svm_separate(instance.weight_domains[static_cast<std::size_t>(i)], pos, neg, &diag);
    } else {
      w = sep_separate(instance.weight_domains[static_cast<std::size_t>(i)], pos, neg, n,
                       weights.rows[static_cast<std::size_t>(i)], &diag);
    }
    if (diag.degenerate_fallback) ++record.separator_fallbacks;
    return w;
  };

  const auto elapsed = [&]() { return clock() - start_time; };

  while (true) {
    if (relative_gap(lb, ub) <= config.threshold) {
      record.reached_threshold = true;
      break;
    }
    if (!flag) break;
    if (elapsed() > config.time_limit_s) {
      record.timeout = true;
      break;
    }
    ++t;

    IterationRow row;
    row.t = t;

    // Linear separation for every unknown constraint.
    double phase_start = clock();
    for (int i = 0; i < m; ++i) {
      weights.rows[static_cast<std::size_t>(i)] = separate_one(i, pools.pos_points(i), pools.neg_points(i));
    }
    row.separation_ms = (clock() - phase_start) * 1000.0;

    std::vector<std::vector<Labeled>> pending_pos(static_cast<std::size_t>(m)),
        pending_neg(static_cast<std::size_t>(m));
    bool surrogate_infeasible = false;

    for (int phase = 0; phase < 2; ++phase) {
      if (oracles.any_exhausted()) {
        flag = false;
        record.budget_exhausted = true;
        break;
      }
      phase_start = clock();
      if (phase == 0) {
        // Sampling: one fresh sub-solution per live constraint.
        for (int i = 0; i < m; ++i) {
          if (!sampler_alive[static_cast<std::size_t>(i)]) continue;
          SampleRequest request;
          request.constraint = i;
          request.n = n;
          request.block_rows = &block_rows[static_cast<std::size_t>(i)];
          request.pos = pools.pos_points(i);
          request.neg = pools.neg_points(i);
          request.w = weights.rows[static_cast<std::size_t>(i)];
          const SampleResult sample = config.sampler == Sampler::Sim
                                          ? sim_sample(request, config.backend, config.node_limit)
                                          : cut_sample(request, config.backend, config.node_limit);
          if (sample.status == SampleStatus::Exhausted) {
            sampler_alive[static_cast<std::size_t>(i)] = 0;
            continue;
          }
          if (sample.node_limit_hit) ++record.sampler_node_limit_hits;
          const auto [label, inferred] = oracles.infer_or_query(i, sample.point, pools);
          (void)inferred;
          if (label > 0) {
            pending_pos[static_cast<std::size_t>(i)].push_back({i, sample.point, label});
          } else {
            pending_neg[static_cast<std::size_t>(i)].push_back({i, sample.point, label});
          }
        }
        row.sampling_ms = (clock() - phase_start) * 1000.0;
      } else {
        // Optimization: solve the surrogate model, then label its blocks.
        const NoGoodCuts cuts = NoGoodCuts::from_pools(pools);
        const DiscreteResult opt =
            solve_surrogate(instance, weights, cuts, config.backend, config.node_limit);
        if (opt.status == DiscreteStatus::NodeLimit && opt.z > -kInf) {
          ++record.surrogate_node_limit_hits;
        }
        if (opt.status == DiscreteStatus::Infeasible ||
            (opt.status == DiscreteStatus::NodeLimit && opt.z <= -kInf)) {
          surrogate_infeasible = true;
          ++record.surrogate_infeasible_iterations;
        } else {
          bool all_positive = true;
          for (int i = 0; i < m; ++i) {
            const Bits block = restrict_to(opt.x, i);
            const auto [label, inferred] = oracles.infer_or_query(i, block, pools);
            if (label > 0) {
              // Inferred positives are recorded too; the dominated point adds
              // only implied cuts, and the pools stay consistent with the
              // global sets.
              pending_pos[static_cast<std::size_t>(i)].push_back({i, block, label});
            } else {
              all_positive = false;
              pending_neg[static_cast<std::size_t>(i)].push_back({i, block, label});
            }
          }
          if (all_positive) {
            pools.add_global_pos(opt.x, t);
            if (opt.z > lb) lb = opt.z;
          } else {
            pools.add_global_neg(opt.x, t);
          }
        }
        row.optimization_ms = (clock() - phase_start) * 1000.0;
      }
    }

    for (int i = 0; i < m; ++i) {
      for (const auto& e : pending_pos[static_cast<std::size_t>(i)]) pools.add_pos(i, e.point, t);
      for (const auto& e : pending_neg[static_cast<std::size_t>(i)]) pools.add_neg(i, e.point, t);
    }

    phase_start = clock();
    if (config.bounding_cadence > 0 && t % config.bounding_cadence == 0) {
      // The search may stop once its certified bound is inside the solver
      // precision of the incumbent, matching how the discrete models would
      // be solved by an off-the-shelf engine with a relative gap tolerance.
      const double stop_below = lb > 0.0 ? lb * (1.0 + config.bounding_gap) : -kInf;
      const UpperBoundResult bound = compute_upper_bound(instance, pools, config.node_limit, ub,
                                                         &bounding_memory, stop_below);
      if (bound.degraded) ++record.degraded_bounds;
      if (bound.all_cut_off) {
        // Every candidate is cut off: the labeled pools cover the space and
        // the incumbent is optimal.
        ub = std::min(ub, lb);
      } else {
        ub = std::min(ub, bound.ub);
      }
    }
    row.bounding_ms = (clock() - phase_start) * 1000.0;

    row.lb = lb;
    row.ub = ub;
    row.calls_total = oracles.total_calls();
    row.calls_max_oracle = oracles.max_calls();
    record.rows.push_back(row);

    if (!record.to_threshold && relative_gap(lb, ub) <= config.threshold) {
      record.to_threshold = Milestone{oracles.total_calls(), t, elapsed()};
    }

    bool any_alive = false;
    for (char a : sampler_alive) any_alive = any_alive || a;
    if (!any_alive && surrogate_infeasible) {
      record.search_exhausted = true;
      break;
    }
    if (elapsed() > config.time_limit_s) {
      record.timeout = true;
      break;
    }
  }

  // Best labeled feasible solution, ties to the lexicographically smallest.
  record.best = Solution::zeros(m, n);
  double best_z = -kInf;
  for (const auto& entry : pools.global_pos()) {
    const double z = entry.item.value(instance.values);
    if (z > best_z || (z == best_z && entry.item.lex_less(record.best))) {
      best_z = z;
      record.best = entry.item;
    }
  }
  lb = std::max(lb, best_z);
  record.lb = lb;
  record.ub = ub;

  // Final separators retrained on the final pools.
  record.final_weights = SurrogateWeights(m, n);
  for (int i = 0; i < m; ++i) {
    record.final_weights.rows[static_cast<std::size_t>(i)] =
        separate_one(i, pools.pos_points(i), pools.neg_points(i));
  }

  record.iterations = t;
  record.time_s = elapsed();
  record.calls_per_oracle = oracles.counters();
  record.calls_total = oracles.total_calls();
  record.calls_max_oracle = oracles.max_calls();
  record.duplicate_queries = oracles.duplicate_hits();
  record.reached_threshold = relative_gap(lb, ub) <= config.threshold;
  record.gap_zero = std::isfinite(ub) && ub - lb <= 1e-9 * std::max(1.0, std::abs(lb));
  if (lb > 0.0 && std::isfinite(ub)) record.gap_pct = 100.0 * (ub - lb) / lb;

  if (instance.hidden_weights) {
    const DiscreteResult truth =
        solve_with_weights(instance, *instance.hidden_weights, SearchBackend::BranchAndBound);
    if (truth.status == DiscreteStatus::Optimal) {
      record.true_optimum = truth.z;
      const double zstar = truth.z;
      record.error_pct = zstar > 0.0 ? 100.0 * (zstar - lb) / zstar : 0.0;
      record.error_zero = std::abs(zstar - lb) <= 1e-6;
      if (record.error_zero) record.error_pct = 0.0;
      double cumulative_ms = 0.0;
      for (const auto& r : record.rows) {
        cumulative_ms += r.separation_ms + r.sampling_ms + r.optimization_ms + r.bounding_ms;
        if (std::abs(r.lb - zstar) <= 1e-6) {
          record.to_optimum = Milestone{r.calls_total, r.t, cumulative_ms / 1000.0};
          break;
        }
      }
    }
  }
  return record;
}

bool final_feasibility_probe(const Instance& instance, const SurrogateWeights& final_weights,
                             OracleSuite& oracles, SearchBackend backend, std::int64_t node_limit) {
  const DiscreteResult opt = solve_with_weights(instance, final_weights.rows, backend, node_limit);
  if (opt.status == DiscreteStatus::Infeasible) return true;  // vacuous
  for (int i = 0; i < instance.m; ++i) {
    if (oracles.probe(i, restrict_to(opt.x, i)) < 0) return false;
  }
  return true;
}

std::string run_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "t,lb,ub,calls_total,calls_max_oracle,phase,elapsed_ms\n";
  const auto emit = [&](const IterationRow& r, const char* phase, double ms) {
    out << r.t << "," << r.lb << ",";
    if (std::isfinite(r.ub)) {
      out << r.ub;
    } else {
      out << "inf";
    }
    out << "," << r.calls_total << "," << r.calls_max_oracle << "," << phase << "," << ms << "\n";
  };
  for (const auto& r : record.rows) {
    emit(r, "separation", r.separation_ms);
    emit(r, "sampling", r.sampling_ms);
    emit(r, "optimization", r.optimization_ms);
    emit(r, "bounding", r.bounding_ms);
  }
  return out.str();
}

std::string summary_json(const RunRecord& record, const Instance& instance,
                         const RunConfig& config, const std::string& instance_name) {
  json j;
  j["config"] = {{"separator", to_string(config.separator)},
                 {"sampler", to_string(config.sampler)},
                 {"budget", config.budget},
                 {"thr", config.threshold},
                 {"seed", config.seed},
                 {"backend", config.backend == SearchBackend::Enumerate ? "enum" : "bnb"},
                 {"node_limit", config.node_limit},
                 {"bounding_cadence", config.bounding_cadence}};
  j["instance"] = {{"name", instance_name}, {"kind", instance.kind}, {"m", instance.m}, {"n", instance.n}};

  json results;
  results["lb"] = record.lb;
  results["ub"] = std::isfinite(record.ub) ? json(record.ub) : json();
  results["gap_pct"] = record.gap_pct ? json(*record.gap_pct) : json();
  results["error_pct"] = record.error_pct ? json(*record.error_pct) : json();
  results["true_optimum"] = record.true_optimum ? json(*record.true_optimum) : json();
  results["calls_total"] = record.calls_total;
  results["calls_max_oracle"] = record.calls_max_oracle;
  results["calls_per_oracle"] = record.calls_per_oracle;
  results["iterations"] = record.iterations;
  results["time_s"] = record.time_s;
  results["best_solution"] = record.best.to_string();
  results["final_weights"] = record.final_weights.rows;
  json flags;
  flags["reached_threshold"] = record.reached_threshold;
  flags["budget_exhausted"] = record.budget_exhausted;
  flags["search_exhausted"] = record.search_exhausted;
  flags["timeout"] = record.timeout;
  flags["gap_zero"] = record.gap_zero;
  flags["error_zero"] = record.error_zero;
  flags["final_feasible"] = record.final_feasible ? json(*record.final_feasible) : json();
  results["flags"] = flags;
  const auto milestone = [](const std::optional<Milestone>& ms) {
    return ms ? json{{"calls", ms->calls}, {"iters", ms->iterations}, {"time_s", ms->time_s}} : json();
  };
  results["to_threshold"] = milestone(record.to_threshold);
  results["to_optimum"] = milestone(record.to_optimum);
  json diagnostics;
  diagnostics["duplicate_queries"] = record.duplicate_queries;
  diagnostics["probe_queries"] = record.probe_queries;
  diagnostics["degraded_bounds"] = record.degraded_bounds;
  diagnostics["separator_fallbacks"] = record.separator_fallbacks;
  diagnostics["sampler_node_limit_hits"] = record.sampler_node_limit_hits;
  diagnostics["surrogate_node_limit_hits"] = record.surrogate_node_limit_hits;
  diagnostics["surrogate_infeasible_iterations"] = record.surrogate_infeasible_iterations;
  results["diagnostics"] = diagnostics;
  j["results"] = results;
  return j.dump(2);
}

}  // namespace iseo
