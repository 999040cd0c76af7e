#include "iseo/oracle.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace iseo {

int InteractiveOracle::label(int i, const Bits& mu) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    out_ << "oracle " << i << " | items {";
    const auto items = mu.support();
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (k > 0) out_ << ",";
      out_ << items[k];
    }
    out_ << "} | feasible? [y/n] " << std::flush;
    std::string line;
    if (!std::getline(in_, line)) {
      throw OracleAborted("interactive oracle: input stream closed");
    }
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (line == "y" || line == "Y") return 1;
    if (line == "n" || line == "N") return -1;
    out_ << "please answer y or n\n";
  }
  throw OracleAborted("interactive oracle: three invalid entries, aborting run");
}

OracleSuite::OracleSuite(std::shared_ptr<OracleBackend> backend, int m, std::int64_t budget)
    : backend_(std::move(backend)),
      m_(m),
      budget_(budget),
      counters_(static_cast<std::size_t>(m), 0),
      cache_(static_cast<std::size_t>(m)) {
  if (budget_ < 1) throw std::invalid_argument("oracle budget must be at least 1");
}

std::int64_t OracleSuite::total_calls() const {
  std::int64_t t = 0;
  for (auto c : counters_) t += c;
  return t;
}

std::int64_t OracleSuite::max_calls() const {
  std::int64_t t = 0;
  for (auto c : counters_) t = std::max(t, c);
  return t;
}

bool OracleSuite::any_exhausted() const {
  for (int i = 0; i < m_; ++i) {
    if (exhausted(i)) return true;
  }
  return false;
}

int OracleSuite::cached_label(int i, const Bits& mu, bool counted) {
  auto& cache = cache_[static_cast<std::size_t>(i)];
  const BitsKey key{mu.words};
  if (auto it = cache.find(key); it != cache.end()) {
    if (counted) ++duplicate_hits_;
    return it->second;
  }
  if (counted) {
    if (counters_[static_cast<std::size_t>(i)] >= budget_) throw BudgetExhausted(i);
    ++counters_[static_cast<std::size_t>(i)];
  }
  const int l = backend_->label(i, mu);
  cache.emplace(key, l);
  return l;
}

int OracleSuite::query(int i, const Bits& mu) { return cached_label(i, mu, true); }

std::pair<int, bool> OracleSuite::infer_or_query(int i, const Bits& mu, const LabeledPools& pools) {
  for (const auto& entry : pools.per_pos(i)) {
    if (mu.subset_of(entry.item)) return {1, true};
  }
  return {query(i, mu), false};
}

int OracleSuite::query_uncounted(int i, const Bits& mu) { return cached_label(i, mu, false); }

int OracleSuite::probe(int i, const Bits& mu) {
  ++probe_calls_;
  return cached_label(i, mu, false);
}

}  // namespace iseo
