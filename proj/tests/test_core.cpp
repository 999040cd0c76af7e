#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iseo/bits.hpp"
#include "iseo/instance.hpp"
#include "iseo/pools.hpp"

using namespace iseo;

TEST_CASE("bits basics and lexicographic order") {
  Bits a = Bits::from_vector({1, 0, 0, 1});
  CHECK(a.n == 4);
  CHECK(a.count() == 2);
  CHECK(a.get(0));
  CHECK_FALSE(a.get(1));
  CHECK(a.to_string() == "1001");

  // Lexicographic on the bit string: 001 < 010 < 100.
  Bits b001 = Bits::from_vector({0, 0, 1});
  Bits b010 = Bits::from_vector({0, 1, 0});
  Bits b100 = Bits::from_vector({1, 0, 0});
  CHECK(b001.lex_less(b010));
  CHECK(b010.lex_less(b100));
  CHECK(b001.lex_less(b100));
  CHECK_FALSE(b100.lex_less(b001));
  CHECK_FALSE(b001.lex_less(b001));

  CHECK(Bits::from_vector({0, 1}).subset_of(Bits::from_vector({1, 1})));
  CHECK_FALSE(Bits::from_vector({1, 0}).subset_of(Bits::from_vector({0, 1})));
  CHECK(Bits::zeros(3).subset_of(Bits::from_vector({0, 0, 0})));

  CHECK(a.dot(std::vector<double>{0.5, 10.0, 10.0, 0.25}) == doctest::Approx(0.75));
  CHECK_THROWS(Bits::from_vector({0, 2}));
}

TEST_CASE("bits above 64 entries") {
  Bits wide(150);
  wide.set(0, true);
  wide.set(77, true);
  wide.set(149, true);
  CHECK(wide.count() == 3);
  CHECK(wide.support() == std::vector<int>{0, 77, 149});
  Bits other = wide;
  other.set(149, false);
  CHECK(other.subset_of(wide));
  CHECK_FALSE(wide.subset_of(other));
  CHECK(wide.lex_less(other) == false);  // wide has the earlier 1 at 149... equal prefix, wide has 1
  CHECK(other.lex_less(wide));
}

TEST_CASE("restriction of a full solution") {
  // m=2, n=2, x=(1,0,0,1)
  Solution x(2, 2);
  x.set_flat(0, true);
  x.set_flat(3, true);
  CHECK(restrict_to(x, 1).to_vector() == std::vector<int>{0, 1});
  CHECK(restrict_to(x, 0).to_vector() == std::vector<int>{1, 0});
  CHECK_THROWS(restrict_to(x, 2));
}

TEST_CASE("dominated feasibility") {
  const std::vector<Bits> pool{Bits::from_vector({1, 0, 1})};
  CHECK(dominated_feasible(Bits::from_vector({1, 0, 0}), pool));
  CHECK_FALSE(dominated_feasible(Bits::from_vector({0, 1, 0}), pool));
  CHECK(dominated_feasible(Bits::zeros(3), pool));
  CHECK_FALSE(dominated_feasible(Bits::zeros(3), {}));
}

TEST_CASE("labeled pools keep set semantics and invariants") {
  LabeledPools pools(2, 2);
  Solution zero = Solution::zeros(2, 2);
  Solution ones = Solution::ones(2, 2);
  pools.add_global_pos(zero, 0);
  pools.add_global_pos(zero, 3);  // duplicate ignored
  pools.add_global_neg(ones, 0);
  pools.add_pos(0, restrict_to(zero, 0), 0);
  pools.add_pos(1, restrict_to(zero, 1), 0);
  pools.add_neg(0, restrict_to(ones, 0), 0);
  pools.add_neg(1, restrict_to(ones, 1), 0);
  CHECK(pools.global_pos().size() == 1);
  CHECK_NOTHROW(pools.check_invariants());

  // Restriction of a global positive missing from the per-constraint pool.
  Solution e0(2, 2);
  e0.set_flat(0, true);
  pools.add_global_pos(e0, 1);
  CHECK_THROWS_AS(pools.check_invariants(), std::logic_error);
  pools.add_pos(0, restrict_to(e0, 0), 1);
  pools.add_pos(1, restrict_to(e0, 1), 1);
  CHECK_NOTHROW(pools.check_invariants());

  // Disjointness violation.
  pools.add_neg(0, restrict_to(e0, 0), 2);
  CHECK_THROWS_AS(pools.check_invariants(), std::logic_error);
}

TEST_CASE("maximal and minimal pool reduction") {
  std::vector<Bits> points{Bits::from_vector({1, 0}), Bits::from_vector({1, 1}),
                           Bits::from_vector({0, 1}), Bits::from_vector({1, 1})};
  const auto maximal = maximal_elements(points);
  REQUIRE(maximal.size() == 1);
  CHECK(maximal[0].to_vector() == std::vector<int>{1, 1});
  const auto minimal = minimal_elements(points);
  REQUIRE(minimal.size() == 2);
  CHECK(minimal[0].to_vector() == std::vector<int>{1, 0});
  CHECK(minimal[1].to_vector() == std::vector<int>{0, 1});
}

namespace {

Instance small_instance() {
  Instance inst;
  inst.kind = "custom";
  inst.m = 2;
  inst.n = 2;
  inst.values = {{1.0, 2.0}, {3.0, 4.0}};
  inst.hidden_weights = {{{0.5, 0.5}, {0.25, 1.0}}};
  inst.space.num_vars = 4;
  LinearRow row;
  row.coeffs = {1.0, 0.0, 1.0, 0.0};
  row.sense = Sense::LessEqual;
  row.rhs = 1.0;
  inst.space.rows.push_back(row);
  inst.space.tags["note"] = "test";
  inst.weight_domains.resize(2);
  return inst;
}

}  // namespace

TEST_CASE("instance json round trip") {
  const Instance inst = small_instance();
  inst.validate();
  const std::string text = inst.to_json();
  const Instance back = Instance::from_json(text);
  CHECK(back.m == 2);
  CHECK(back.n == 2);
  CHECK(back.values == inst.values);
  CHECK(back.hidden_weights == inst.hidden_weights);
  CHECK(back.space.rows.size() == 1);
  CHECK(back.space.tags.at("note") == "test");
  CHECK(back.to_json() == text);  // canonical form is stable
}

TEST_CASE("instance validation names violations") {
  Instance inst = small_instance();
  inst.values[0][0] = -1.0;
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  inst = small_instance();
  (*inst.hidden_weights)[0][0] = 1.5;
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  inst = small_instance();
  inst.weight_domains.pop_back();
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  // A weight domain cut that excludes the whole unit box.
  inst = small_instance();
  inst.weight_domains[0].cuts.push_back({{1.0, 1.0}, -1.0});
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  // A space row violated by the all-zeros point must be flagged.
  inst = small_instance();
  LinearRow row;
  row.coeffs = {1.0, 1.0, 0.0, 0.0};
  row.sense = Sense::GreaterEqual;
  row.rhs = 1.0;
  inst.space.rows.push_back(row);
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  inst.space.possibly_empty = true;
  CHECK_NOTHROW(inst.validate());
}

TEST_CASE("block rows pick local structure only") {
  Instance inst = small_instance();  // row spans blocks 0 and 1
  CHECK(inst.space.block_rows(2, 2, 0).empty());

  LinearRow local;
  local.coeffs = {0.0, 0.0, 1.0, 1.0};
  local.sense = Sense::LessEqual;
  local.rhs = 1.0;
  inst.space.rows.push_back(local);
  const auto rows = inst.space.block_rows(2, 2, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].coeffs == std::vector<double>{1.0, 1.0});
}
