#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iseo/problems.hpp"
#include "iseo/run.hpp"

using namespace iseo;

namespace {

Instance knapsack2(std::vector<double> values, std::vector<double> hidden) {
  Instance inst;
  inst.kind = "custom";
  inst.m = 1;
  inst.n = static_cast<int>(values.size());
  inst.values = {std::move(values)};
  inst.hidden_weights = {{std::move(hidden)}};
  inst.space.num_vars = inst.n;
  inst.weight_domains.resize(1);
  return inst;
}

RunRecord run_on(const Instance& inst, Separator separator, Sampler sampler, std::int64_t budget,
                 double thr = 0.01) {
  RunConfig config;
  config.separator = separator;
  config.sampler = sampler;
  config.budget = budget;
  config.threshold = thr;
  config.clock = virtual_clock();
  OracleSuite suite(std::make_shared<SimulatedOracle>(*inst.hidden_weights), inst.m, budget);
  return run(inst, suite, config);
}

void check_trajectory(const RunRecord& record, std::int64_t budget) {
  CHECK(record.calls_max_oracle <= budget);
  double last_lb = -1.0, last_ub = std::numeric_limits<double>::infinity();
  for (const auto& row : record.rows) {
    CHECK(row.lb >= last_lb);
    CHECK(row.ub <= last_ub + 1e-12);
    if (std::isfinite(row.ub)) CHECK(row.lb <= row.ub + 1e-9);
    last_lb = row.lb;
    last_ub = row.ub;
  }
}

}  // namespace

TEST_CASE("the worked two-item run") {
  // v=(1,2), true weights (0.55,0.60): (1,1) is infeasible at 1.15, so the
  // optimum is (0,1) with value 2. Every strategy pair finds it.
  const Instance inst = knapsack2({1.0, 2.0}, {0.55, 0.60});
  for (auto separator : {Separator::Svm, Separator::Sep}) {
    for (auto sampler : {Sampler::Sim, Sampler::Cut}) {
      const RunRecord record = run_on(inst, separator, sampler, 50);
      CHECK(record.best.blocks[0].to_vector() == std::vector<int>{0, 1});
      CHECK(record.lb == doctest::Approx(2.0));
      CHECK(record.error_pct.value() == doctest::Approx(0.0));
      CHECK(record.error_zero);
      CHECK(record.ub == doctest::Approx(2.0));
      check_trajectory(record, 50);
    }
  }
}

TEST_CASE("single items only: the argmax single item wins") {
  // w=(1,1): feasible set {0, e1, e2}; best is e2 with value 2.
  const Instance inst = knapsack2({1.0, 2.0}, {1.0, 1.0});
  const RunRecord record = run_on(inst, Separator::Svm, Sampler::Sim, 50, 0.0);
  CHECK(record.best.blocks[0].to_vector() == std::vector<int>{0, 1});
  CHECK(record.lb == doctest::Approx(2.0));
  CHECK(record.error_zero);
}

TEST_CASE("a budget of one stops before any phase") {
  const Instance inst = knapsack2({1.0, 2.0}, {0.55, 0.60});
  const RunRecord record = run_on(inst, Separator::Svm, Sampler::Sim, 1);
  CHECK(record.budget_exhausted);
  CHECK_FALSE(record.reached_threshold);
  CHECK(record.lb == doctest::Approx(0.0));  // best labeled so far is 0
  CHECK(record.calls_max_oracle <= 1);
}

TEST_CASE("finite convergence with unlimited budget and zero threshold") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = gen_knapsack(KnapsackKind::Uncorrelated, 5, 12, seed);
    for (auto separator : {Separator::Svm, Separator::Sep}) {
      for (auto sampler : {Sampler::Sim, Sampler::Cut}) {
        const RunRecord record = run_on(inst, separator, sampler, 1000000000, 0.0);
        CHECK(record.error_zero);
        CHECK(record.gap_zero);
        check_trajectory(record, 1000000000);
      }
    }
  }
}

TEST_CASE("sandwich property along the trajectory") {
  const Instance inst = gen_knapsack(KnapsackKind::WeaklyCorrelated, 7, 9, 2);
  const RunRecord record = run_on(inst, Separator::Sep, Sampler::Cut, 300, 0.0);
  REQUIRE(record.true_optimum.has_value());
  for (const auto& row : record.rows) {
    CHECK(row.lb <= *record.true_optimum + 1e-9);
    if (std::isfinite(row.ub)) CHECK(row.ub >= *record.true_optimum - 1e-9);
  }
}

TEST_CASE("deterministic summaries for identical configurations") {
  const Instance inst = gen_knapsack(KnapsackKind::Uncorrelated, 8, 14, 5);
  RunConfig config;
  config.separator = Separator::Sep;
  config.sampler = Sampler::Cut;
  config.budget = 60;
  config.clock = virtual_clock();
  OracleSuite a(std::make_shared<SimulatedOracle>(*inst.hidden_weights), 1, 60);
  const RunRecord ra = run(inst, a, config);
  config.clock = virtual_clock();
  OracleSuite b(std::make_shared<SimulatedOracle>(*inst.hidden_weights), 1, 60);
  const RunRecord rb = run(inst, b, config);
  CHECK(summary_json(ra, inst, config, "x") == summary_json(rb, inst, config, "x"));
}

TEST_CASE("final feasibility probe") {
  const Instance inst = knapsack2({1.0, 2.0}, {0.55, 0.60});
  OracleSuite suite(std::make_shared<SimulatedOracle>(*inst.hidden_weights), 1, 10);
  {
    // Oracle-identical surrogate weights: the probe solution is feasible.
    SurrogateWeights w(1, 2);
    w.rows[0] = {0.55, 0.60};
    CHECK(final_feasibility_probe(inst, w, suite));
  }
  {
    // All-zero surrogates propose the all-ones point, which is infeasible.
    SurrogateWeights w(1, 2);
    CHECK_FALSE(final_feasibility_probe(inst, w, suite));
  }
  CHECK(suite.probe_calls() > 0);
  CHECK(suite.calls(0) == 0);  // probes are never counted
}

TEST_CASE("csv trace format") {
  const Instance inst = knapsack2({1.0, 2.0}, {0.55, 0.60});
  const RunRecord record = run_on(inst, Separator::Svm, Sampler::Sim, 50);
  const std::string csv = run_csv(record);
  CHECK(csv.rfind("t,lb,ub,calls_total,calls_max_oracle,phase,elapsed_ms\n", 0) == 0);
  CHECK(csv.find(",separation,") != std::string::npos);
  CHECK(csv.find(",sampling,") != std::string::npos);
  CHECK(csv.find(",optimization,") != std::string::npos);
  CHECK(csv.find(",bounding,") != std::string::npos);
}

TEST_CASE("interactive oracle answers drive a run end to end") {
  const Instance inst = knapsack2({1.0, 2.0}, {0.55, 0.60});
  // Scripted human: every question about a pair is infeasible, single items
  // and the empty set are feasible. 64 canned answers cover the run.
  std::string script;
  for (int k = 0; k < 64; ++k) script += "n\ny\n";
  std::istringstream in(script);
  std::ostringstream out;
  Instance blind = inst;
  blind.hidden_weights.reset();
  RunConfig config;
  config.separator = Separator::Svm;
  config.sampler = Sampler::Sim;
  config.budget = 4;
  config.clock = virtual_clock();
  OracleSuite suite(std::make_shared<InteractiveOracle>(in, out), 1, 4);
  const RunRecord record = run(blind, suite, config);
  CHECK_FALSE(record.error_pct.has_value());  // no hidden weights, no error metric
  CHECK(record.calls_max_oracle <= 4);
  CHECK(out.str().find("feasible? [y/n]") != std::string::npos);
}
