/**
 * @file pools.hpp
 * @brief Labeled solution pools: global S+/S- and per-constraint S+_i/S-_i.
 */

#ifndef ISEO_POOLS_HPP
#define ISEO_POOLS_HPP

#include <utility>
#include <vector>

#include "iseo/bits.hpp"

namespace iseo {

/// Restriction of a full solution to the variables of unknown constraint i.
Bits restrict_to(const Solution& x, int i);

/// True iff mu <= sigma componentwise for some sigma in the positive pool,
/// in which case feasibility of mu is implied (nonnegative weights).
bool dominated_feasible(const Bits& mu, const std::vector<Bits>& positive_pool);

/// Pool element with the iteration it was added at.
template <typename T>
struct Stamped {
  T item;
  int iteration = 0;
};

/// Labeled pools maintained by one run. Confined to a single run; never
/// shared across threads.
class LabeledPools {
 public:
  LabeledPools() = default;
  LabeledPools(int m, int n);

  int num_constraints() const { return static_cast<int>(per_pos_.size()); }

  const std::vector<Stamped<Solution>>& global_pos() const { return global_pos_; }
  const std::vector<Stamped<Solution>>& global_neg() const { return global_neg_; }
  const std::vector<Stamped<Bits>>& per_pos(int i) const { return per_pos_[static_cast<std::size_t>(i)]; }
  const std::vector<Stamped<Bits>>& per_neg(int i) const { return per_neg_[static_cast<std::size_t>(i)]; }

  /// Plain views (no stamps) used by separation, sampling and bounding.
  std::vector<Bits> pos_points(int i) const;
  std::vector<Bits> neg_points(int i) const;
  std::vector<Solution> global_pos_points() const;

  bool global_pos_contains(const Solution& x) const;
  bool global_neg_contains(const Solution& x) const;
  bool pos_contains(int i, const Bits& b) const;
  bool neg_contains(int i, const Bits& b) const;

  /// Inserts keep set semantics: duplicates are ignored.
  void add_global_pos(const Solution& x, int t);
  void add_global_neg(const Solution& x, int t);
  void add_pos(int i, const Bits& b, int t);
  void add_neg(int i, const Bits& b, int t);

  /// Throws std::logic_error naming the violated invariant:
  /// disjoint pools, and restriction of every global positive present in the
  /// matching per-constraint positive pool.
  void check_invariants() const;

 private:
  std::vector<Stamped<Solution>> global_pos_, global_neg_;
  std::vector<std::vector<Stamped<Bits>>> per_pos_, per_neg_;
};

/// Maximal elements of a positive pool: dominated points carry no extra
/// information for nonnegative weights.
std::vector<Bits> maximal_elements(const std::vector<Bits>& points);

/// Minimal elements of a negative pool.
std::vector<Bits> minimal_elements(const std::vector<Bits>& points);

}  // namespace iseo

#endif  // ISEO_POOLS_HPP
