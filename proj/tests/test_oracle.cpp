#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "iseo/oracle.hpp"

using namespace iseo;

namespace {

OracleSuite make_suite(std::vector<std::vector<double>> weights, std::int64_t budget) {
  const int m = static_cast<int>(weights.size());
  return OracleSuite(std::make_shared<SimulatedOracle>(std::move(weights)), m, budget);
}

}  // namespace

TEST_CASE("simulated oracle boundary convention") {
  auto suite = make_suite({{0.5, 0.5}}, 10);
  CHECK(suite.query(0, Bits::from_vector({1, 1})) == 1);  // sum exactly 1 is feasible

  auto tight = make_suite({{0.6, 0.6}}, 10);
  CHECK(tight.query(0, Bits::from_vector({1, 1})) == -1);
  CHECK(tight.query(0, Bits::zeros(2)) == 1);  // zero always feasible
  CHECK(tight.calls(0) == 2);
}

TEST_CASE("budget enforcement and caching") {
  auto suite = make_suite({{0.3, 0.4, 0.5}}, 2);
  CHECK(suite.query(0, Bits::from_vector({1, 0, 0})) == 1);
  CHECK(suite.query(0, Bits::from_vector({1, 0, 0})) == 1);  // cache, not counted
  CHECK(suite.calls(0) == 1);
  CHECK(suite.duplicate_hits() == 1);
  CHECK(suite.query(0, Bits::from_vector({0, 1, 0})) == 1);
  CHECK(suite.calls(0) == 2);
  CHECK(suite.exhausted(0));
  CHECK_THROWS_AS(suite.query(0, Bits::from_vector({0, 0, 1})), BudgetExhausted);
  // A cached point is still answered after exhaustion.
  CHECK(suite.query(0, Bits::from_vector({1, 0, 0})) == 1);

  // Probe calls never consume budget and are logged separately.
  CHECK(suite.probe(0, Bits::from_vector({0, 0, 1})) == 1);
  CHECK(suite.calls(0) == 2);
  CHECK(suite.probe_calls() == 1);

  // Initial accounting per the pseudo-code: counters are charged in bulk.
  auto fresh = make_suite({{0.5}}, 5);
  CHECK(fresh.query_uncounted(0, Bits::from_vector({1})) == 1);
  CHECK(fresh.calls(0) == 0);
  fresh.add_initial_calls(0, 1);
  CHECK(fresh.calls(0) == 1);
}

TEST_CASE("label inference from dominated positives") {
  LabeledPools pools(1, 2);
  pools.add_pos(0, Bits::from_vector({1, 1}), 0);

  auto suite = make_suite({{0.3, 0.4}}, 10);
  // mu=(1,0) dominated by (1,1): inferred, counter unchanged.
  auto [l1, inferred1] = suite.infer_or_query(0, Bits::from_vector({1, 0}), pools);
  CHECK(l1 == 1);
  CHECK(inferred1);
  CHECK(suite.calls(0) == 0);

  // Not dominated: direct evaluation 0.4 <= 1, counter +1.
  LabeledPools sparse(1, 2);
  sparse.add_pos(0, Bits::from_vector({1, 0}), 0);
  auto [l2, inferred2] = suite.infer_or_query(0, Bits::from_vector({0, 1}), sparse);
  CHECK(l2 == 1);
  CHECK_FALSE(inferred2);
  CHECK(suite.calls(0) == 1);

  auto heavy = make_suite({{0.6, 0.6}}, 10);
  auto [l3, inferred3] = heavy.infer_or_query(0, Bits::from_vector({1, 1}), sparse);
  CHECK(l3 == -1);
  CHECK_FALSE(inferred3);
}

TEST_CASE("simulated oracle is a pure function of weights and point") {
  auto a = make_suite({{0.25, 0.75}}, 100);
  auto b = make_suite({{0.25, 0.75}}, 100);
  for (int mask = 0; mask < 4; ++mask) {
    Bits mu = Bits::from_vector({mask & 1, (mask >> 1) & 1});
    CHECK(a.query(0, mu) == b.query(0, mu));
  }
}

TEST_CASE("interactive oracle prompt protocol") {
  {
    std::istringstream in("y\nn\n");
    std::ostringstream out;
    InteractiveOracle oracle(in, out);
    CHECK(oracle.label(0, Bits::from_vector({1, 0, 1})) == 1);
    CHECK(oracle.label(1, Bits::from_vector({0, 1, 0})) == -1);
    CHECK(out.str().find("oracle 0 | items {0,2} | feasible? [y/n]") != std::string::npos);
    CHECK(out.str().find("oracle 1 | items {1} | feasible? [y/n]") != std::string::npos);
  }
  {
    // Three invalid entries abort the run.
    std::istringstream in("what\nmaybe\n42\n");
    std::ostringstream out;
    InteractiveOracle oracle(in, out);
    CHECK_THROWS_AS(oracle.label(0, Bits::from_vector({1})), OracleAborted);
  }
  {
    // Recovery after invalid input.
    std::istringstream in("bogus\n y \n");
    std::ostringstream out;
    InteractiveOracle oracle(in, out);
    CHECK(oracle.label(0, Bits::from_vector({1})) == 1);
  }
}
