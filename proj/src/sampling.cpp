#include "iseo/sampling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "iseo/pools.hpp"

namespace iseo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CutChecks {
  std::vector<Bits> pos;  // maximal elements: mu must not be a subset of any
  std::vector<Bits> neg;  // minimal elements: mu must not be a superset of any

  bool fresh(const Bits& mu) const {
    for (const auto& sp : pos) {
      if (mu.subset_of(sp)) return false;
    }
    for (const auto& sm : neg) {
      if (sm.subset_of(mu)) return false;
    }
    return true;
  }
};

bool rows_satisfied(const std::vector<LinearRow>& rows, const Bits& mu) {
  for (const auto& row : rows) {
    if (!row.satisfied(mu.dot(row.coeffs))) return false;
  }
  return true;
}

// Objective policies. Leaf objectives are evaluated with Bits::dot so both
// backends produce bit-identical values.
struct SimObjective {
  const std::vector<double>* w;

  double leaf(const Bits& mu) const { return std::abs(1.0 - mu.dot(*w)); }

  bool admissible(const Bits&) const { return true; }

  // Reachable weight sums lie in [s, s + rest]; distance of 1 to the interval.
  double lower_bound(double s, double rest, int, int) const {
    if (s > 1.0) return s - 1.0;
    if (s + rest < 1.0) return 1.0 - s - rest;
    return 0.0;
  }
};

struct CutObjective {
  const std::vector<double>* w;

  double leaf(const Bits& mu) const {
    const double num = mu.dot(*w) - 1.0;
    return num * num / static_cast<double>(mu.count());
  }

  bool admissible(const Bits& mu) const { return mu.any(); }  // h_mu needs mu != 0

  double lower_bound(double s, double rest, int ones, int free_vars) const {
    double num = 0.0;
    if (s > 1.0) {
      num = s - 1.0;
    } else if (s + rest < 1.0) {
      num = 1.0 - s - rest;
    }
    const int max_ones = ones + free_vars;
    if (max_ones == 0) return kInf;
    return num * num / static_cast<double>(max_ones);
  }
};

struct SearchState {
  int n = 0;
  const std::vector<double>* w = nullptr;
  const std::vector<LinearRow>* rows = nullptr;
  CutChecks cuts;
  std::vector<double> weight_suffix;      // sum of w_j for j >= d
  std::vector<std::vector<double>> row_min_suffix, row_max_suffix;

  bool found = false;
  Bits best_point;
  double best_obj = kInf;
  std::int64_t nodes = 0;
  std::int64_t node_limit = 0;
  bool limit_hit = false;
};

template <typename Objective>
void dfs(SearchState& st, const Objective& obj, Bits& prefix, int depth, double partial_sum,
         int ones, std::vector<double>& row_lhs) {
  if (st.limit_hit) return;
  if (++st.nodes > st.node_limit) {
    st.limit_hit = true;
    return;
  }

  const double rest = st.weight_suffix[static_cast<std::size_t>(depth)];
  const double lb = obj.lower_bound(partial_sum, rest, ones, st.n - depth);
  if (st.found && lb > st.best_obj + 1e-12) return;

  // Row feasibility over all completions of this prefix.
  for (std::size_t r = 0; r < st.rows->size(); ++r) {
    const auto& row = (*st.rows)[r];
    const double lo = row_lhs[r] + st.row_min_suffix[r][static_cast<std::size_t>(depth)];
    const double hi = row_lhs[r] + st.row_max_suffix[r][static_cast<std::size_t>(depth)];
    if (row.sense != Sense::GreaterEqual && lo > row.rhs + 1e-9) return;
    if (row.sense != Sense::LessEqual && hi < row.rhs - 1e-9) return;
  }

  if (depth == st.n) {
    if (!obj.admissible(prefix)) return;
    if (!st.cuts.fresh(prefix)) return;
    const double value = obj.leaf(prefix);
    if (!st.found || value < st.best_obj) {
      st.found = true;
      st.best_obj = value;
      st.best_point = prefix;
    }
    return;
  }

  // Domination pruning: completions of a prefix whose remaining support
  // cannot escape a positive point, or already covers a negative point with
  // no negative positions left open, are all stale.
  for (const auto& sp : st.cuts.pos) {
    bool escaped = false;
    for (int j = 0; j < depth && !escaped; ++j) {
      if (prefix.get(j) && !sp.get(j)) escaped = true;
    }
    if (!escaped) {
      bool can_escape = false;
      for (int j = depth; j < st.n && !can_escape; ++j) {
        if (!sp.get(j)) can_escape = true;
      }
      if (!can_escape) return;
    }
  }
  for (const auto& sm : st.cuts.neg) {
    bool missed = false;
    bool open = false;
    for (int j = 0; j < st.n; ++j) {
      if (!sm.get(j)) continue;
      if (j < depth) {
        if (!prefix.get(j)) missed = true;
      } else {
        open = true;
      }
    }
    if (!missed && !open) return;
  }

  const double wj = (*st.w)[static_cast<std::size_t>(depth)];
  // Zero branch first: leaves are visited in lexicographic order, so the
  // first optimum found is the lexicographically smallest.
  for (int bit = 0; bit <= 1; ++bit) {
    prefix.set(depth, bit == 1);
    if (bit == 1) {
      for (std::size_t r = 0; r < st.rows->size(); ++r) {
        row_lhs[r] += (*st.rows)[r].coeffs[static_cast<std::size_t>(depth)];
      }
    }
    dfs(st, obj, prefix, depth + 1, partial_sum + (bit == 1 ? wj : 0.0), ones + bit, row_lhs);
    if (bit == 1) {
      for (std::size_t r = 0; r < st.rows->size(); ++r) {
        row_lhs[r] -= (*st.rows)[r].coeffs[static_cast<std::size_t>(depth)];
      }
    }
  }
  prefix.set(depth, false);
}

template <typename Objective>
SampleResult enumerate_all(const SampleRequest& request, const Objective& obj,
                           const CutChecks& cuts) {
  const int n = request.n;
  if (n > 26) {
    throw std::invalid_argument("sampling: enumeration backend supports n <= 26");
  }
  static const std::vector<LinearRow> kNoRows;
  const auto& rows = request.block_rows ? *request.block_rows : kNoRows;

  SampleResult result;
  Bits candidate(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    candidate.words[0] = mask;
    if (!obj.admissible(candidate)) continue;
    if (!cuts.fresh(candidate)) continue;
    if (!rows_satisfied(rows, candidate)) continue;
    const double value = obj.leaf(candidate);
    if (result.status != SampleStatus::Ok || value < result.objective ||
        (value == result.objective && candidate.lex_less(result.point))) {
      result.status = SampleStatus::Ok;
      result.objective = value;
      result.point = candidate;
    }
  }
  return result;
}

template <typename Objective>
SampleResult branch_and_bound(const SampleRequest& request, const Objective& obj,
                              const CutChecks& cuts, std::int64_t node_limit) {
  const int n = request.n;
  static const std::vector<LinearRow> kNoRows;
  const auto& rows = request.block_rows ? *request.block_rows : kNoRows;

  SearchState st;
  st.n = n;
  st.w = &request.w;
  st.rows = &rows;
  st.cuts = cuts;
  st.node_limit = node_limit;
  st.weight_suffix.assign(static_cast<std::size_t>(n + 1), 0.0);
  for (int j = n - 1; j >= 0; --j) {
    st.weight_suffix[static_cast<std::size_t>(j)] =
        st.weight_suffix[static_cast<std::size_t>(j + 1)] + request.w[static_cast<std::size_t>(j)];
  }
  st.row_min_suffix.resize(rows.size());
  st.row_max_suffix.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    st.row_min_suffix[r].assign(static_cast<std::size_t>(n + 1), 0.0);
    st.row_max_suffix[r].assign(static_cast<std::size_t>(n + 1), 0.0);
    for (int j = n - 1; j >= 0; --j) {
      const double c = rows[r].coeffs[static_cast<std::size_t>(j)];
      st.row_min_suffix[r][static_cast<std::size_t>(j)] =
          st.row_min_suffix[r][static_cast<std::size_t>(j + 1)] + std::min(0.0, c);
      st.row_max_suffix[r][static_cast<std::size_t>(j)] =
          st.row_max_suffix[r][static_cast<std::size_t>(j + 1)] + std::max(0.0, c);
    }
  }

  Bits prefix(n);
  std::vector<double> row_lhs(rows.size(), 0.0);
  dfs(st, obj, prefix, 0, 0.0, 0, row_lhs);

  SampleResult result;
  if (st.found) {
    result.status = SampleStatus::Ok;
    result.point = st.best_point;
    result.objective = st.best_obj;
  }
  result.node_limit_hit = st.limit_hit;
  return result;
}

template <typename Objective>
SampleResult sample_impl(const SampleRequest& request, const Objective& obj, SearchBackend backend,
                         std::int64_t node_limit) {
  if (static_cast<int>(request.w.size()) != request.n) {
    throw std::invalid_argument("sampling: surrogate row dimension mismatch");
  }
  CutChecks cuts{maximal_elements(request.pos), minimal_elements(request.neg)};

  SampleResult result = backend == SearchBackend::Enumerate
                            ? enumerate_all(request, obj, cuts)
                            : branch_and_bound(request, obj, cuts, node_limit);

  // The freshness contract is re-checked on every sample.
  if (result.status == SampleStatus::Ok && !cuts.fresh(result.point)) {
    throw std::logic_error("sampling: returned point violates a no-good cut");
  }
  return result;
}

}  // namespace

SampleResult sim_sample(const SampleRequest& request, SearchBackend backend,
                        std::int64_t node_limit) {
  return sample_impl(request, SimObjective{&request.w}, backend, node_limit);
}

SampleResult cut_sample(const SampleRequest& request, SearchBackend backend,
                        std::int64_t node_limit) {
  return sample_impl(request, CutObjective{&request.w}, backend, node_limit);
}

}  // namespace iseo
