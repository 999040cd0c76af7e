#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iseo/sampling.hpp"

using namespace iseo;

namespace {

SampleRequest make_request(int n, std::vector<double> w, std::initializer_list<std::vector<int>> pos,
                           std::initializer_list<std::vector<int>> neg) {
  SampleRequest req;
  req.constraint = 0;
  req.n = n;
  req.w = std::move(w);
  for (const auto& p : pos) req.pos.push_back(Bits::from_vector(p));
  for (const auto& m : neg) req.neg.push_back(Bits::from_vector(m));
  return req;
}

// Test-local brute force over all candidates surviving the no-good cuts.
struct BruteResult {
  bool found = false;
  Bits point;
  double objective = 0.0;
};

template <typename Objective>
BruteResult brute_force(const SampleRequest& req, const Objective& objective, bool exclude_zero) {
  BruteResult best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << req.n); ++mask) {
    Bits mu(req.n);
    mu.words[0] = mask;
    if (exclude_zero && !mu.any()) continue;
    bool fresh = true;
    for (const auto& sp : req.pos) {
      if (mu.subset_of(sp)) fresh = false;
    }
    for (const auto& sm : req.neg) {
      if (sm.subset_of(mu)) fresh = false;
    }
    if (!fresh) continue;
    if (req.block_rows) {
      bool ok = true;
      for (const auto& row : *req.block_rows) {
        if (!row.satisfied(mu.dot(row.coeffs))) ok = false;
      }
      if (!ok) continue;
    }
    const double value = objective(mu);
    if (!best.found || value < best.objective ||
        (value == best.objective && mu.lex_less(best.point))) {
      best.found = true;
      best.objective = value;
      best.point = mu;
    }
  }
  return best;
}

double sim_objective_of(const SampleRequest& req, const Bits& mu) {
  return std::abs(1.0 - mu.dot(req.w));
}

double cut_objective_of(const SampleRequest& req, const Bits& mu) {
  const double num = mu.dot(req.w) - 1.0;
  return num * num / mu.count();
}

}  // namespace

TEST_CASE("simple margin on the worked state") {
  auto req = make_request(3, {0.2, 0.3, 0.9}, {{0, 0, 0}}, {{1, 1, 1}});
  for (auto backend : {SearchBackend::Enumerate, SearchBackend::BranchAndBound}) {
    const auto r = sim_sample(req, backend);
    REQUIRE(r.status == SampleStatus::Ok);
    CHECK(r.point.to_vector() == std::vector<int>{0, 0, 1});
    CHECK(r.objective == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("simple margin reaches zero when the hyperplane is attainable") {
  auto req = make_request(2, {0.5, 0.5}, {{0, 0}}, {});
  const auto r = sim_sample(req);
  REQUIRE(r.status == SampleStatus::Ok);
  CHECK(r.objective == doctest::Approx(0.0));
  CHECK(r.point.to_vector() == std::vector<int>{1, 1});
}

TEST_CASE("sampler exhaustion when every point is implied") {
  auto req = make_request(1, {0.4}, {{1}}, {});
  CHECK(sim_sample(req).status == SampleStatus::Exhausted);
  CHECK(cut_sample(req).status == SampleStatus::Exhausted);
}

TEST_CASE("closest cutting plane on the worked states") {
  {
    auto req = make_request(2, {0.5, 0.5}, {{0, 0}}, {});
    const auto r = cut_sample(req);
    REQUIRE(r.status == SampleStatus::Ok);
    CHECK(r.point.to_vector() == std::vector<int>{1, 1});
    CHECK(r.objective == doctest::Approx(0.0));
  }
  {
    auto req = make_request(3, {0.2, 0.3, 0.9}, {{0, 0, 0}}, {{1, 1, 1}});
    for (auto backend : {SearchBackend::Enumerate, SearchBackend::BranchAndBound}) {
      const auto r = cut_sample(req, backend);
      REQUIRE(r.status == SampleStatus::Ok);
      CHECK(r.point.to_vector() == std::vector<int>{1, 0, 1});
      CHECK(r.objective == doctest::Approx(0.005).epsilon(1e-9));
    }
    // The eliminated projection variable reproduces the same objective:
    // p = w - ((w.mu - 1)/||mu||^2) mu and sum (p - w)^2 equals the value.
    const auto r = cut_sample(req);
    const auto mu = r.point;
    const double scale = (mu.dot(req.w) - 1.0) / mu.count();
    double dist2 = 0.0;
    for (int j = 0; j < req.n; ++j) {
      const double delta = mu.get(j) ? scale : 0.0;
      dist2 += delta * delta;
    }
    CHECK(dist2 == doctest::Approx(r.objective).epsilon(1e-12));
  }
}

TEST_CASE("backend equivalence against brute force") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    SampleRequest req;
    req.constraint = 0;
    req.n = n;
    req.w.resize(static_cast<std::size_t>(n));
    for (double& v : req.w) v = unit(rng);
    req.pos.push_back(Bits::zeros(n));
    for (int k = 0; k < 4; ++k) {
      Bits mu(n);
      for (int j = 0; j < n; ++j) mu.set(j, rng() % 2 == 0);
      (rng() % 2 == 0 ? req.pos : req.neg).push_back(mu);
    }

    const auto sim_brute = brute_force(req, [&](const Bits& mu) { return sim_objective_of(req, mu); }, false);
    const auto cut_brute = brute_force(req, [&](const Bits& mu) { return cut_objective_of(req, mu); }, true);
    for (auto backend : {SearchBackend::Enumerate, SearchBackend::BranchAndBound}) {
      const auto sim = sim_sample(req, backend);
      const auto cut = cut_sample(req, backend);
      REQUIRE(sim.status == (sim_brute.found ? SampleStatus::Ok : SampleStatus::Exhausted));
      REQUIRE(cut.status == (cut_brute.found ? SampleStatus::Ok : SampleStatus::Exhausted));
      if (sim_brute.found) {
        CHECK(sim.objective == sim_brute.objective);  // exact
        CHECK(sim.point == sim_brute.point);
      }
      if (cut_brute.found) {
        CHECK(std::abs(cut.objective - cut_brute.objective) <= 1e-9);
      }
    }
  }
}

TEST_CASE("freshness holds on every sample") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    SampleRequest req;
    req.constraint = 0;
    req.n = n;
    req.w.resize(static_cast<std::size_t>(n));
    for (double& v : req.w) v = unit(rng);
    req.pos.push_back(Bits::zeros(n));
    for (int k = 0; k < 6; ++k) {
      Bits mu(n);
      for (int j = 0; j < n; ++j) mu.set(j, rng() % 2 == 0);
      (rng() % 2 == 0 ? req.pos : req.neg).push_back(mu);
    }
    for (auto* sampler : {&sim_sample, &cut_sample}) {
      const auto r = (*sampler)(req, SearchBackend::BranchAndBound, 50000);
      if (r.status != SampleStatus::Ok) continue;
      for (const auto& sp : req.pos) CHECK_FALSE(r.point.subset_of(sp));
      for (const auto& sm : req.neg) CHECK_FALSE(sm.subset_of(r.point));
    }
  }
}

TEST_CASE("block rows restrict the sampled set") {
  // x_0 + x_1 <= 1 forbids picking both items.
  auto req = make_request(2, {0.4, 0.4}, {{0, 0}}, {});
  LinearRow row;
  row.coeffs = {1.0, 1.0};
  row.sense = Sense::LessEqual;
  row.rhs = 1.0;
  std::vector<LinearRow> rows{row};
  req.block_rows = &rows;
  for (auto backend : {SearchBackend::Enumerate, SearchBackend::BranchAndBound}) {
    const auto r = sim_sample(req, backend);
    REQUIRE(r.status == SampleStatus::Ok);
    CHECK(r.point.count() == 1);
    CHECK(r.objective == doctest::Approx(0.6));
  }
}
