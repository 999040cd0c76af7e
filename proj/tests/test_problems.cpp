#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "iseo/problems.hpp"

using namespace iseo;

TEST_CASE("knapsack generation contracts") {
  for (auto kind : {KnapsackKind::Uncorrelated, KnapsackKind::WeaklyCorrelated,
                    KnapsackKind::StronglyCorrelated}) {
    const Instance inst = gen_knapsack(kind, 15, 10, 7);
    CHECK(inst.m == 1);
    CHECK(inst.n == 15);
    REQUIRE(inst.hidden_weights.has_value());
    for (double w : (*inst.hidden_weights)[0]) {
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
    }
    for (double v : inst.values[0]) {
      CHECK(v >= 1.0);
      CHECK(v <= 11000.0);
    }
  }
  CHECK(gen_knapsack(KnapsackKind::Uncorrelated, 8, 1, 1).kind == "knap-u");
  CHECK_THROWS_AS(gen_knapsack(KnapsackKind::Uncorrelated, 8, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_knapsack(KnapsackKind::Uncorrelated, 8, 31, 1), std::invalid_argument);
}

TEST_CASE("knapsack capacity and clamp arithmetic") {
  // With the strongly correlated rule the raw weight is recoverable as
  // v - 1000, which pins the capacity relation w_bar = min(raw/c, 1),
  // c = h * sum / 31.
  const Instance inst = gen_knapsack(KnapsackKind::StronglyCorrelated, 12, 15, 3);
  const auto& values = inst.values[0];
  const auto& hidden = (*inst.hidden_weights)[0];
  double weight_sum = 0.0;
  for (double v : values) weight_sum += v - 1000.0;
  const double capacity = 15.0 * weight_sum / 31.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double raw = values[j] - 1000.0;
    CHECK(raw >= 1.0);
    CHECK(raw <= 10000.0);
    CHECK(hidden[j] == doctest::Approx(std::min(raw / capacity, 1.0)).epsilon(1e-12));
  }
  // h=1 shrinks the capacity below most raw weights: clamps must be logged.
  const Instance tight = gen_knapsack(KnapsackKind::StronglyCorrelated, 12, 1, 3);
  CHECK(tight.space.tags.count("clamped_weights") == 1);
}

TEST_CASE("catalog generation always passes the consistency rules") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const CourseCatalog catalog = gen_catalog(20, seed);
    CHECK_NOTHROW(validate_catalog(catalog));
  }
  // Single course: trivially consistent, no relations possible.
  const CourseCatalog one = gen_catalog(1, 5);
  CHECK(one.courses[0].prerequisite_sets.empty());
  // Zero densities give a pure knapsack-like instance (no rows).
  const CourseCatalog flat = gen_catalog(12, 9, CatalogDensity{0.0, 0.0, 0.0});
  const Instance inst = gen_cspp(flat, 4);
  CHECK(inst.space.rows.empty());
}

TEST_CASE("catalog validation names the violated rule") {
  CourseCatalog catalog;
  catalog.courses.resize(2);
  catalog.courses[0].lecture_credits = 3;
  catalog.courses[1].lecture_credits = 3;

  // Rule (c): one-sided corequisite.
  catalog.courses[0].corequisites.insert(1);
  CHECK_THROWS_WITH_AS(validate_catalog(catalog), doctest::Contains("rule (c)"),
                       std::invalid_argument);
  catalog.courses[0].corequisites.clear();

  // Rule (b): mutual prerequisites.
  catalog.courses[0].prerequisite_sets.push_back({1});
  catalog.courses[1].prerequisite_sets.push_back({0});
  CHECK_THROWS_WITH_AS(validate_catalog(catalog), doctest::Contains("rule (b)"),
                       std::invalid_argument);
  catalog.courses[1].prerequisite_sets.clear();

  // Rule (a): a course both prerequisite and alternative.
  catalog.courses[0].alternatives.insert(1);
  catalog.courses[1].alternatives.insert(0);
  CHECK_THROWS_WITH_AS(validate_catalog(catalog), doctest::Contains("rule (a)"),
                       std::invalid_argument);
}

TEST_CASE("study plan instance arithmetic") {
  CourseCatalog catalog;
  catalog.courses.resize(3);
  catalog.courses[0] = {3, 0, 9, {}, {}, {}};
  catalog.courses[1] = {4, 1, 6, {{0}}, {}, {}};
  catalog.courses[2] = {2, 2, 4, {}, {}, {1}};
  catalog.courses[1].alternatives.insert(2);

  const Instance inst = gen_cspp(catalog, 11);
  CHECK(inst.m == 1);
  CHECK(inst.n == 3);
  CHECK(inst.values[0] == std::vector<double>{12.0, 11.0, 8.0});
  // Hidden weight of course i is at least the known hours share
  // eta_i = 14(a_i + b_i)/1700 and at most 1.
  const double eta0 = 14.0 * 3.0 / 1700.0;
  CHECK((*inst.hidden_weights)[0][0] >= eta0 - 1e-12);
  CHECK((*inst.hidden_weights)[0][0] <= 1.0);

  // Rows: one prerequisite row, one alternatives row (emitted once per pair).
  REQUIRE(inst.space.rows.size() == 2);
  const auto& prereq = inst.space.rows[0];
  CHECK(prereq.coeffs == std::vector<double>{-1.0, 1.0, 0.0});
  CHECK(prereq.sense == Sense::LessEqual);
  CHECK(prereq.rhs == 0.0);
  const auto& alt = inst.space.rows[1];
  CHECK(alt.coeffs == std::vector<double>{0.0, 1.0, 1.0});
  CHECK(alt.rhs == 1.0);
}

TEST_CASE("assignment file parsing") {
  {
    const auto instances = parse_gap("1 2 2  3 2 1 4  5 5 5 5  10 10");
    REQUIRE(instances.size() == 1);
    const Instance& inst = instances[0];
    CHECK(inst.m == 2);
    CHECK(inst.n == 2);
    CHECK(inst.values == std::vector<std::vector<double>>{{3.0, 2.0}, {1.0, 4.0}});
    CHECK(*inst.hidden_weights == std::vector<std::vector<double>>{{0.5, 0.5}, {0.5, 0.5}});
    REQUIRE(inst.space.rows.size() == 2);  // one partition row per job
    CHECK(inst.space.rows[0].coeffs == std::vector<double>{1.0, 0.0, 1.0, 0.0});

    // Round trip through the instance schema is identity.
    const Instance back = Instance::from_json(inst.to_json());
    CHECK(back.to_json() == inst.to_json());
  }
  CHECK_THROWS_WITH_AS(parse_gap("1 2 2  3 2 1"), doctest::Contains("token"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_gap("1 1 1  3  5  0"), doctest::Contains("capacity"),
                       std::invalid_argument);
}

TEST_CASE("generated assignment text parses to the requested shape") {
  const std::string text = gen_gap_orlib_text(5, 5, 15, 42);
  const auto instances = parse_gap(text);
  REQUIRE(instances.size() == 5);
  for (const auto& inst : instances) {
    CHECK(inst.m == 5);
    CHECK(inst.n == 15);
    CHECK(inst.space.rows.size() == 15);
  }
}

TEST_CASE("adversarial family") {
  const AdversarialFamily family = gen_adversarial(8, 0.5);
  CHECK(family.C == 1);
  // In the base instance every single item is feasible, every pair is not.
  const auto& base_w = (*family.base.hidden_weights)[0];
  for (double w : base_w) CHECK(w == doctest::Approx(1.0));

  const Instance variant = family.with_subset({2, 5});
  const auto& w = (*variant.hidden_weights)[0];
  CHECK(w[2] == doctest::Approx(0.5));
  CHECK(w[5] == doctest::Approx(0.5));
  CHECK(w[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(family.with_subset({1}), std::invalid_argument);
  CHECK_THROWS_AS(family.with_subset({1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(gen_adversarial(2, 0.5), std::invalid_argument);

  // Ceiling arithmetic: eps = 0.26 gives C = 3.
  CHECK(gen_adversarial(8, 0.26).C == 3);
}
