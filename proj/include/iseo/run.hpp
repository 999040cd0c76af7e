/**
 * @file run.hpp
 * @brief The interactive sampling-enhanced optimization loop: separation,
 *        sampling, optimization and bounding phases with full bookkeeping.
 */

#ifndef ISEO_RUN_HPP
#define ISEO_RUN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iseo/discrete.hpp"
#include "iseo/instance.hpp"
#include "iseo/oracle.hpp"
#include "iseo/sampling.hpp"

namespace iseo {

enum class Separator { Svm, Sep };
enum class Sampler { Sim, Cut };

std::string to_string(Separator s);
std::string to_string(Sampler s);
Separator separator_from_string(const std::string& s);
Sampler sampler_from_string(const std::string& s);

struct RunConfig {
  Separator separator = Separator::Svm;
  Sampler sampler = Sampler::Sim;
  std::int64_t budget = 2000;
  double threshold = 0.01;
  SearchBackend backend = SearchBackend::Enumerate;  // block-level subproblems
  std::uint64_t seed = 0;
  double time_limit_s = 600.0;
  int bounding_cadence = 1;  // bound every k-th iteration
  double bounding_gap = 1e-4;  // relative precision of the bounding solve
  std::int64_t node_limit = 50000;
  /// Clock used for timings; swap in a deterministic counter to make
  /// summaries byte-reproducible.
  std::function<double()> clock;
};

/// Deterministic clock: advances by a fixed step per reading.
std::function<double()> virtual_clock(double step_s = 0.001);

struct IterationRow {
  int t = 0;
  double lb = 0.0;
  double ub = 0.0;
  std::int64_t calls_total = 0;
  std::int64_t calls_max_oracle = 0;
  double separation_ms = 0.0;
  double sampling_ms = 0.0;
  double optimization_ms = 0.0;
  double bounding_ms = 0.0;
};

struct Milestone {
  std::int64_t calls = 0;
  int iterations = 0;
  double time_s = 0.0;
};

struct RunRecord {
  // trajectory
  std::vector<IterationRow> rows;
  // final state
  Solution best;
  double lb = 0.0;
  double ub = 0.0;
  SurrogateWeights final_weights;
  // flags
  bool reached_threshold = false;
  bool budget_exhausted = false;
  bool search_exhausted = false;
  bool timeout = false;
  bool gap_zero = false;
  bool error_zero = false;                 // reported as solved-to-optimality
  std::optional<bool> final_feasible;      // probe outcome, when run
  // metrics
  std::optional<double> true_optimum;      // from hidden weights, when provable
  std::optional<double> error_pct;
  std::optional<double> gap_pct;           // absent when LB <= 0 (gap undefined)
  std::int64_t calls_total = 0;
  std::int64_t calls_max_oracle = 0;
  std::vector<std::int64_t> calls_per_oracle;
  int iterations = 0;
  double time_s = 0.0;
  std::optional<Milestone> to_threshold;
  std::optional<Milestone> to_optimum;
  // diagnostics
  std::int64_t duplicate_queries = 0;
  std::int64_t probe_queries = 0;
  int degraded_bounds = 0;
  int separator_fallbacks = 0;
  int sampler_node_limit_hits = 0;
  int surrogate_node_limit_hits = 0;
  int surrogate_infeasible_iterations = 0;
};

/// Relative gap with the LB <= 0 convention: +inf whenever LB <= 0 or UB
/// is not finite.
double relative_gap(double lb, double ub);

/// Executes the full loop on fresh oracles. The initial labeled sets are
/// S+(0) = {0} and S-(0) = {1}.
RunRecord run(const Instance& instance, OracleSuite& oracles, const RunConfig& config);

/// Re-optimizes with the final surrogate weights in place of the unknown
/// constraints (no cuts) and submits every sub-solution of the result to its
/// oracle. Probe calls are logged separately and never counted against the
/// budget.
bool final_feasibility_probe(const Instance& instance, const SurrogateWeights& final_weights,
                             OracleSuite& oracles,
                             SearchBackend backend = SearchBackend::BranchAndBound,
                             std::int64_t node_limit = 50000000);

/// One CSV row per phase per iteration:
/// t,lb,ub,calls_total,calls_max_oracle,phase,elapsed_ms
std::string run_csv(const RunRecord& record);

/// Summary JSON with all reported columns; byte-stable for a fixed clock.
std::string summary_json(const RunRecord& record, const Instance& instance,
                         const RunConfig& config, const std::string& instance_name);

}  // namespace iseo

#endif  // ISEO_RUN_HPP
