/**
 * @file discrete.hpp
 * @brief Discrete optimization over the combinatorial space X: the surrogate
 *        optimization step and the joint separation-optimization upper bound.
 */

#ifndef ISEO_DISCRETE_HPP
#define ISEO_DISCRETE_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "iseo/bits.hpp"
#include "iseo/instance.hpp"
#include "iseo/pools.hpp"
#include "iseo/sampling.hpp"

namespace iseo {

/// No-good cuts: global positive cuts forbid x <= s+ componentwise, negative
/// cuts per constraint forbid x_i >= s- componentwise.
struct NoGoodCuts {
  std::vector<Solution> global_pos;
  std::vector<std::vector<Bits>> per_neg;  // indexed by constraint

  static NoGoodCuts from_pools(const LabeledPools& pools);
};

enum class DiscreteStatus { Optimal, Infeasible, NodeLimit };

struct DiscreteResult {
  DiscreteStatus status = DiscreteStatus::Infeasible;
  Solution x;
  double z = 0.0;
  std::int64_t nodes = 0;
};

/// Surrogate optimization: max z(x) over x in X with w_i.x_i <= 1 for all i
/// plus all no-good cuts. Exact on completion; on node limit the incumbent
/// is returned with status NodeLimit.
DiscreteResult solve_surrogate(const Instance& instance, const SurrogateWeights& w,
                               const NoGoodCuts& cuts,
                               SearchBackend backend = SearchBackend::BranchAndBound,
                               std::int64_t node_limit = 50000);

/// Exact optimum of the instance under explicit weight rows (used with the
/// hidden weights for error metrics and with final surrogates for the
/// feasibility probe). No cuts.
DiscreteResult solve_with_weights(const Instance& instance,
                                  const std::vector<std::vector<double>>& weight_rows,
                                  SearchBackend backend = SearchBackend::BranchAndBound,
                                  std::int64_t node_limit = 50000000);

/// Bounding state that stays valid as pools grow: a block pattern that no
/// consistent weight vector admits can only stay inadmissible, and the
/// coordinatewise weight minima only increase. Carrying both across rounds
/// saves most of the witness LPs.
struct BoundingMemory {
  std::vector<std::vector<Bits>> failed_blocks;
  std::vector<std::vector<double>> relaxation;
  int rounds_since_refresh = 0;
};

struct UpperBoundResult {
  double ub = 0.0;
  bool all_cut_off = false;   // no candidate qualified; ub is -inf
  bool degraded = false;      // node limit hit; ub is the weakest valid bound
  bool has_witness = false;
  Solution witness;
  std::int64_t nodes = 0;
  std::int64_t lp_checks = 0;
};

/// Upper bound from the joint separation-optimization model: the best z(x)
/// over x in X satisfying the negative no-good cuts such that for every i
/// some w_i in the weight domain classifies the pools correctly and admits
/// x_i. The bilinear coupling is split: x is enumerated best-first, w is
/// checked per constraint by LP feasibility. Candidates above ub_cap never
/// qualify (the model optimum is non-increasing as pools grow), so a
/// certified bound from an earlier round skips their LP checks.
UpperBoundResult compute_upper_bound(const Instance& instance, const LabeledPools& pools,
                                     std::int64_t node_limit = 50000,
                                     double ub_cap = std::numeric_limits<double>::infinity(),
                                     BoundingMemory* memory = nullptr,
                                     double stop_below = -std::numeric_limits<double>::infinity());

}  // namespace iseo

#endif  // ISEO_DISCRETE_HPP
