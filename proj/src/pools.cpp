#include "iseo/pools.hpp"

#include <stdexcept>

namespace iseo {

Bits restrict_to(const Solution& x, int i) {
  if (i < 0 || i >= x.num_blocks()) throw std::out_of_range("restrict_to: constraint index out of range");
  return x.blocks[static_cast<std::size_t>(i)];
}

bool dominated_feasible(const Bits& mu, const std::vector<Bits>& positive_pool) {
  for (const auto& sigma : positive_pool) {
    if (mu.subset_of(sigma)) return true;
  }
  return false;
}

LabeledPools::LabeledPools(int m, int n)
    : per_pos_(static_cast<std::size_t>(m)), per_neg_(static_cast<std::size_t>(m)) {
  (void)n;
}

std::vector<Bits> LabeledPools::pos_points(int i) const {
  std::vector<Bits> v;
  v.reserve(per_pos_[static_cast<std::size_t>(i)].size());
  for (const auto& e : per_pos_[static_cast<std::size_t>(i)]) v.push_back(e.item);
  return v;
}

std::vector<Bits> LabeledPools::neg_points(int i) const {
  std::vector<Bits> v;
  v.reserve(per_neg_[static_cast<std::size_t>(i)].size());
  for (const auto& e : per_neg_[static_cast<std::size_t>(i)]) v.push_back(e.item);
  return v;
}

std::vector<Solution> LabeledPools::global_pos_points() const {
  std::vector<Solution> v;
  v.reserve(global_pos_.size());
  for (const auto& e : global_pos_) v.push_back(e.item);
  return v;
}

bool LabeledPools::global_pos_contains(const Solution& x) const {
  for (const auto& e : global_pos_) {
    if (e.item == x) return true;
  }
  return false;
}

bool LabeledPools::global_neg_contains(const Solution& x) const {
  for (const auto& e : global_neg_) {
    if (e.item == x) return true;
  }
  return false;
}

bool LabeledPools::pos_contains(int i, const Bits& b) const {
  for (const auto& e : per_pos_[static_cast<std::size_t>(i)]) {
    if (e.item == b) return true;
  }
  return false;
}

bool LabeledPools::neg_contains(int i, const Bits& b) const {
  for (const auto& e : per_neg_[static_cast<std::size_t>(i)]) {
    if (e.item == b) return true;
  }
  return false;
}

void LabeledPools::add_global_pos(const Solution& x, int t) {
  if (!global_pos_contains(x)) global_pos_.push_back({x, t});
}

void LabeledPools::add_global_neg(const Solution& x, int t) {
  if (!global_neg_contains(x)) global_neg_.push_back({x, t});
}

void LabeledPools::add_pos(int i, const Bits& b, int t) {
  if (!pos_contains(i, b)) per_pos_[static_cast<std::size_t>(i)].push_back({b, t});
}

void LabeledPools::add_neg(int i, const Bits& b, int t) {
  if (!neg_contains(i, b)) per_neg_[static_cast<std::size_t>(i)].push_back({b, t});
}

void LabeledPools::check_invariants() const {
  for (const auto& e : global_pos_) {
    if (global_neg_contains(e.item)) {
      throw std::logic_error("pool invariant violated: S+ and S- intersect");
    }
  }
  for (int i = 0; i < num_constraints(); ++i) {
    for (const auto& e : per_pos_[static_cast<std::size_t>(i)]) {
      if (neg_contains(i, e.item)) {
        throw std::logic_error("pool invariant violated: S+_i and S-_i intersect");
      }
    }
  }
  for (const auto& e : global_pos_) {
    for (int i = 0; i < e.item.num_blocks(); ++i) {
      if (i < num_constraints() && !pos_contains(i, restrict_to(e.item, i))) {
        throw std::logic_error(
            "pool invariant violated: restriction of a global positive missing "
            "from its per-constraint pool");
      }
    }
  }
}

std::vector<Bits> maximal_elements(const std::vector<Bits>& points) {
  std::vector<Bits> result;
  for (std::size_t a = 0; a < points.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < points.size() && !dominated; ++b) {
      if (a == b) continue;
      if (points[a].subset_of(points[b]) && points[a] != points[b]) dominated = true;
      // equal duplicates: keep the first occurrence only
      if (points[a] == points[b] && b < a) dominated = true;
    }
    if (!dominated) result.push_back(points[a]);
  }
  return result;
}

std::vector<Bits> minimal_elements(const std::vector<Bits>& points) {
  std::vector<Bits> result;
  for (std::size_t a = 0; a < points.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < points.size() && !dominated; ++b) {
      if (a == b) continue;
      if (points[b].subset_of(points[a]) && points[a] != points[b]) dominated = true;
      if (points[a] == points[b] && b < a) dominated = true;
    }
    if (!dominated) result.push_back(points[a]);
  }
  return result;
}

}  // namespace iseo
