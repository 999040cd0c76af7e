/**
 * @file sampling.hpp
 * @brief SIM and CUT sampling: pick a never-before-labeled sub-solution for
 *        one unknown constraint.
 */

#ifndef ISEO_SAMPLING_HPP
#define ISEO_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "iseo/bits.hpp"
#include "iseo/instance.hpp"

namespace iseo {

enum class SearchBackend { Enumerate, BranchAndBound };

struct SampleRequest {
  int constraint = 0;
  int n = 0;
  const std::vector<LinearRow>* block_rows = nullptr;  // rows of X local to this block
  std::vector<Bits> pos, neg;                          // S+_i, S-_i
  std::vector<double> w;                               // surrogate row w_i
};

enum class SampleStatus { Ok, Exhausted };

struct SampleResult {
  SampleStatus status = SampleStatus::Exhausted;
  Bits point;
  double objective = 0.0;
  bool node_limit_hit = false;  // incumbent returned, flagged suboptimal
};

/// Simple margin: min |1 - w.mu| over X_i minus points whose label is
/// implied by the pools. Ties break to the lexicographically smallest
/// bit string.
SampleResult sim_sample(const SampleRequest& request,
                        SearchBackend backend = SearchBackend::Enumerate,
                        std::int64_t node_limit = 50000);

/// Closest cutting plane: min squared distance (w.mu - 1)^2 / ||mu||^2 from
/// w to the hyperplane {omega : omega.mu = 1}. The continuous projection
/// variable of the underlying model is eliminated with the closed form.
SampleResult cut_sample(const SampleRequest& request,
                        SearchBackend backend = SearchBackend::Enumerate,
                        std::int64_t node_limit = 50000);

}  // namespace iseo

#endif  // ISEO_SAMPLING_HPP
