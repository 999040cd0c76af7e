/**
 * @file oracle.hpp
 * @brief Membership oracles with per-oracle budgets, caching and label
 *        inference from dominated feasible points.
 */

#ifndef ISEO_ORACLE_HPP
#define ISEO_ORACLE_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "iseo/bits.hpp"
#include "iseo/pools.hpp"

namespace iseo {

struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(int oracle)
      : std::runtime_error("oracle budget exhausted"), oracle_index(oracle) {}
  int oracle_index;
};

struct OracleAborted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Answers membership queries for all m unknown constraints.
class OracleBackend {
 public:
  virtual ~OracleBackend() = default;
  /// Returns +1 iff the sub-solution satisfies unknown constraint i.
  virtual int label(int i, const Bits& mu) = 0;
};

/// Pure function of the hidden weights. The boundary w.mu = 1 counts
/// feasible; 1e-12 absorbs float noise in generated weights.
class SimulatedOracle : public OracleBackend {
 public:
  explicit SimulatedOracle(std::vector<std::vector<double>> hidden_weights)
      : weights_(std::move(hidden_weights)) {}

  int label(int i, const Bits& mu) override {
    return mu.dot(weights_[static_cast<std::size_t>(i)]) <= 1.0 + 1e-12 ? 1 : -1;
  }

 private:
  std::vector<std::vector<double>> weights_;
};

/// Prompts a human on the attached streams. Three invalid entries abort
/// the run.
class InteractiveOracle : public OracleBackend {
 public:
  InteractiveOracle(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  int label(int i, const Bits& mu) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Budgeted front end over a backend: counters n_i, duplicate cache, and
/// separately logged probe calls. One suite per run.
class OracleSuite {
 public:
  OracleSuite(std::shared_ptr<OracleBackend> backend, int m, std::int64_t budget);

  int num_oracles() const { return m_; }
  std::int64_t budget() const { return budget_; }
  std::int64_t calls(int i) const { return counters_[static_cast<std::size_t>(i)]; }
  std::int64_t total_calls() const;
  std::int64_t max_calls() const;
  std::int64_t duplicate_hits() const { return duplicate_hits_; }
  std::int64_t probe_calls() const { return probe_calls_; }
  const std::vector<std::int64_t>& counters() const { return counters_; }

  bool exhausted(int i) const { return counters_[static_cast<std::size_t>(i)] >= budget_; }
  bool any_exhausted() const;

  /// Counted query. Exact repeats are answered from the cache without
  /// consuming budget. Throws BudgetExhausted when a counted call would
  /// exceed the budget.
  int query(int i, const Bits& mu);

  /// Returns (+1, true) without an oracle call when mu is dominated by a
  /// positive pool point; otherwise delegates to query().
  std::pair<int, bool> infer_or_query(int i, const Bits& mu, const LabeledPools& pools);

  /// Uncounted query used during initialization (the pseudo-code charges
  /// |S-(0)| per oracle in one shot via add_initial_calls).
  int query_uncounted(int i, const Bits& mu);

  /// Uncounted, separately logged query used by the final feasibility probe.
  int probe(int i, const Bits& mu);

  void add_initial_calls(int i, std::int64_t k) { counters_[static_cast<std::size_t>(i)] += k; }

 private:
  struct BitsKey {
    std::array<std::uint64_t, Bits::kWords> words;
    bool operator==(const BitsKey&) const = default;
  };
  struct BitsKeyHash {
    std::size_t operator()(const BitsKey& k) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (auto w : k.words) h = (h ^ w) * 0x100000001b3ull;
      return static_cast<std::size_t>(h);
    }
  };

  int cached_label(int i, const Bits& mu, bool counted);

  std::shared_ptr<OracleBackend> backend_;
  int m_;
  std::int64_t budget_;
  std::vector<std::int64_t> counters_;
  std::vector<std::unordered_map<BitsKey, int, BitsKeyHash>> cache_;
  std::int64_t duplicate_hits_ = 0;
  std::int64_t probe_calls_ = 0;
};

}  // namespace iseo

#endif  // ISEO_ORACLE_HPP
