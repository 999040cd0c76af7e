#include "iseo/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <queue>
#include <unordered_map>

#include "iseo/linear_system.hpp"
#include "iseo/lp.hpp"

namespace iseo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dominated cuts are implied: forbidding x <= s+ for a maximal s+ covers
// every dominated positive, and x >= s- for a minimal s- covers every
// dominating negative.
NoGoodCuts reduce_cuts(const NoGoodCuts& cuts, int m) {
  NoGoodCuts reduced;
  for (std::size_t a = 0; a < cuts.global_pos.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < cuts.global_pos.size() && !dominated; ++b) {
      if (a == b) continue;
      const auto& xa = cuts.global_pos[a];
      const auto& xb = cuts.global_pos[b];
      if (xa.subset_of(xb) && xa != xb) dominated = true;
      if (xa == xb && b < a) dominated = true;
    }
    if (!dominated) reduced.global_pos.push_back(cuts.global_pos[a]);
  }
  reduced.per_neg.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (i < static_cast<int>(cuts.per_neg.size())) {
      reduced.per_neg[static_cast<std::size_t>(i)] = minimal_elements(cuts.per_neg[static_cast<std::size_t>(i)]);
    }
  }
  return reduced;
}

/// Feasibility oracle for one candidate block in the bounding model: does a
/// weight vector in the domain exist that classifies the pools correctly and
/// admits the block? Pool rows are fixed per call; the candidate adds one row.
class WeightWitness {
 public:
  WeightWitness(const WeightDomain& domain, const std::vector<Bits>& pos,
                const std::vector<Bits>& neg, int n)
      : n_(n) {
    base_ = LinearSystem::box(n, 0.0, 1.0);
    for (const auto& cut : domain.cuts) base_.add_row(cut.a, Sense::LessEqual, cut.b);
    pos_max_ = maximal_elements(pos);
    neg_min_ = minimal_elements(neg);
    for (const auto& sp : pos_max_) {
      base_.add_row(to_coeffs(sp), Sense::LessEqual, 1.0);
    }
    for (const auto& sm : neg_min_) {
      base_.add_row(to_coeffs(sm), Sense::GreaterEqual, 1.0);
    }
    base_feasible_ = lp_feasible(base_).feasible;
  }

  bool base_feasible() const { return base_feasible_; }

  bool admits(const Bits& block) {
    if (!base_feasible_) return false;
    if (!block.any()) return true;  // w.0 = 0 <= 1 always
    const ExactKey key{block.words};
    if (const auto it = exact_.find(key); it != exact_.end()) return it->second;
    bool verdict;
    if (dominated_feasible(block, pos_max_)) {
      verdict = true;
    } else if (dominated_feasible(block, admitted_)) {
      // Admission is monotone: subsets of admitted blocks are admitted,
      // supersets of failed blocks fail.
      verdict = true;
    } else if ([&] {
                 for (const auto& bad : failed_) {
                   if (bad.subset_of(block)) return true;
                 }
                 return false;
               }()) {
      verdict = false;
    } else if (!relaxation_.empty() && block.dot(relaxation_) > 1.0 + 1e-9) {
      verdict = false;
      record(block, false);
    } else {
      LinearSystem sys = base_;
      sys.add_row(to_coeffs(block), Sense::LessEqual, 1.0);
      verdict = lp_feasible(sys).feasible;
      ++lp_calls_;
      record(block, verdict);
    }
    exact_.emplace(key, verdict);
    return verdict;
  }

  std::int64_t lp_calls() const { return lp_calls_; }

  /// Coordinatewise minima of w over the pool-consistent domain. Any
  /// admissible block satisfies sum of these minima over its support <= 1,
  /// which gives a valid knapsack relaxation for bounding and pruning.
  std::vector<double> relaxation_weights() {
    std::vector<double> ell(static_cast<std::size_t>(n_), 0.0);
    if (!base_feasible_) return ell;
    std::vector<double> objective(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      objective[static_cast<std::size_t>(j)] = 1.0;
      const LpOptimum opt = lp_minimize(base_, objective);
      objective[static_cast<std::size_t>(j)] = 0.0;
      ell[static_cast<std::size_t>(j)] = std::max(0.0, opt.feasible ? opt.value : 0.0);
    }
    return ell;
  }

 private:
  std::vector<double> to_coeffs(const Bits& b) const {
    std::vector<double> c(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) c[static_cast<std::size_t>(j)] = b.get(j) ? 1.0 : 0.0;
    return c;
  }

  struct ExactKey {
    std::array<std::uint64_t, Bits::kWords> words;
    bool operator==(const ExactKey&) const = default;
  };
  struct ExactKeyHash {
    std::size_t operator()(const ExactKey& k) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (auto w : k.words) h = (h ^ w) * 0x100000001b3ull;
      return static_cast<std::size_t>(h);
    }
  };

  void record(const Bits& block, bool verdict) {
    auto& store = verdict ? admitted_ : failed_;
    auto& cap = verdict ? admitted_reduce_at_ : failed_reduce_at_;
    store.push_back(block);
    if (store.size() >= cap) {
      store = verdict ? maximal_elements(store) : minimal_elements(store);
      cap = 2 * store.size() + 16;
    }
  }

  int n_;
  LinearSystem base_;
  std::vector<Bits> pos_max_, neg_min_;
  bool base_feasible_ = false;
  std::vector<Bits> admitted_, failed_;
  std::size_t admitted_reduce_at_ = 64, failed_reduce_at_ = 64;
  std::unordered_map<ExactKey, bool, ExactKeyHash> exact_;
  std::vector<double> relaxation_;
  std::int64_t lp_calls_ = 0;

 public:
  void set_relaxation(std::vector<double> ell) { relaxation_ = std::move(ell); }
  void seed_failed(const std::vector<Bits>& failed) { failed_ = failed; }
  std::vector<Bits> take_failed() { return minimal_elements(failed_); }
};

enum class EngineMode { Surrogate, Bounding };

/// Shared search machinery for the discrete models over X. Variables are
/// branched in a fixed order: at-most-one groups first (members by value
/// descending, groups by best value descending), then the remaining
/// variables by value descending.
struct Engine {
  // problem
  const Instance* instance = nullptr;
  EngineMode mode = EngineMode::Surrogate;
  const std::vector<std::vector<double>>* weight_rows = nullptr;  // surrogate mode
  NoGoodCuts cuts;
  std::vector<WeightWitness>* witnesses = nullptr;  // bounding mode
  double ub_cap = kInf;     // certified bound from earlier rounds
  double stop_below = -kInf;  // abandon the search once the top bound sinks here
  std::int64_t node_limit = 0;

  // static tables
  std::vector<int> order;        // position -> flat variable
  std::vector<int> position_of;  // flat variable -> position
  std::vector<int> group_of;     // flat variable -> group id or -1
  int num_groups = 0;
  std::vector<std::vector<int>> group_members;  // value-sorted flat vars
  std::vector<std::vector<double>> row_min_suffix, row_max_suffix;
  std::vector<double> flat_values;
  std::vector<double> flat_weights;           // surrogate rows flattened, or empty
  std::vector<std::vector<int>> block_ratio;  // per block: ungrouped vars, v/w descending
  std::vector<int> pos_cut_last_escape;       // per positive cut

  // search state
  Solution current;
  std::vector<double> row_lhs;
  std::vector<double> block_load;
  std::vector<int> group_used;
  std::vector<int> pos_cut_escaped_depth;
  double z_fixed = 0.0;

  // results
  bool found = false;
  Solution best;
  double best_z = -kInf;
  std::int64_t nodes = 0;
  bool limit_hit = false;
  double unexplored_bound = -kInf;
  std::int64_t lp_checks = 0;

  void setup();
  double bound_at(int depth) const;
  bool can_complete(int depth) const;
  bool leaf_accept();
  void dfs(int depth);
  void run_dfs();
  void run_best_first();
};

void Engine::setup() {
  const int m = instance->m, n = instance->n;
  const int total = m * n;

  flat_values.resize(static_cast<std::size_t>(total));
  for (int f = 0; f < total; ++f) {
    flat_values[static_cast<std::size_t>(f)] = instance->values[static_cast<std::size_t>(f / n)][static_cast<std::size_t>(f % n)];
  }
  if (weight_rows) {
    flat_weights.resize(static_cast<std::size_t>(total));
    for (int f = 0; f < total; ++f) {
      flat_weights[static_cast<std::size_t>(f)] =
          (*weight_rows)[static_cast<std::size_t>(f / n)][static_cast<std::size_t>(f % n)];
    }
  }

  // Groups from at-most-one rows with 0/1 coefficients.
  group_of.assign(static_cast<std::size_t>(total), -1);
  num_groups = 0;
  group_members.clear();
  for (const auto& row : instance->space.rows) {
    if (row.sense != Sense::LessEqual || row.rhs != 1.0) continue;
    bool zero_one = true;
    for (double c : row.coeffs) {
      if (c != 0.0 && c != 1.0) {
        zero_one = false;
        break;
      }
    }
    if (!zero_one) continue;
    std::vector<int> members;
    for (int f = 0; f < total; ++f) {
      if (row.coeffs[static_cast<std::size_t>(f)] == 1.0 && group_of[static_cast<std::size_t>(f)] < 0) {
        group_of[static_cast<std::size_t>(f)] = num_groups;
        members.push_back(f);
      }
    }
    if (!members.empty()) {
      ++num_groups;
      group_members.push_back(std::move(members));
    }
  }
  const auto value_of = [&](int f) { return flat_values[static_cast<std::size_t>(f)]; };
  for (auto& members : group_members) {
    std::stable_sort(members.begin(), members.end(),
                     [&](int a, int b) { return value_of(a) > value_of(b); });
  }
  std::vector<int> group_order(static_cast<std::size_t>(num_groups));
  for (int g = 0; g < num_groups; ++g) group_order[static_cast<std::size_t>(g)] = g;
  std::stable_sort(group_order.begin(), group_order.end(), [&](int a, int b) {
    return value_of(group_members[static_cast<std::size_t>(a)].front()) >
           value_of(group_members[static_cast<std::size_t>(b)].front());
  });

  order.clear();
  order.reserve(static_cast<std::size_t>(total));
  for (int g : group_order) {
    for (int f : group_members[static_cast<std::size_t>(g)]) order.push_back(f);
  }
  std::vector<int> loose;
  for (int f = 0; f < total; ++f) {
    if (group_of[static_cast<std::size_t>(f)] < 0) loose.push_back(f);
  }
  std::stable_sort(loose.begin(), loose.end(), [&](int a, int b) { return value_of(a) > value_of(b); });
  order.insert(order.end(), loose.begin(), loose.end());
  position_of.assign(static_cast<std::size_t>(total), 0);
  for (int p = 0; p < total; ++p) position_of[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;

  // Ungrouped variables per block ordered by value/weight for the fractional
  // relaxation bound (plain value order when weights are absent).
  block_ratio.assign(static_cast<std::size_t>(m), {});
  for (int f : loose) block_ratio[static_cast<std::size_t>(f / n)].push_back(f);
  if (!flat_weights.empty()) {
    for (auto& list : block_ratio) {
      std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
        const double wa = std::max(flat_weights[static_cast<std::size_t>(a)], 1e-12);
        const double wb = std::max(flat_weights[static_cast<std::size_t>(b)], 1e-12);
        return value_of(a) * wb > value_of(b) * wa;
      });
    }
  }

  const auto& rows = instance->space.rows;
  row_min_suffix.assign(rows.size(), std::vector<double>(static_cast<std::size_t>(total + 1), 0.0));
  row_max_suffix.assign(rows.size(), std::vector<double>(static_cast<std::size_t>(total + 1), 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int p = total - 1; p >= 0; --p) {
      const double c = rows[r].coeffs[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
      row_min_suffix[r][static_cast<std::size_t>(p)] = row_min_suffix[r][static_cast<std::size_t>(p + 1)] + std::min(0.0, c);
      row_max_suffix[r][static_cast<std::size_t>(p)] = row_max_suffix[r][static_cast<std::size_t>(p + 1)] + std::max(0.0, c);
    }
  }

  pos_cut_last_escape.assign(cuts.global_pos.size(), -1);
  pos_cut_escaped_depth.assign(cuts.global_pos.size(), std::numeric_limits<int>::max());
  for (std::size_t k = 0; k < cuts.global_pos.size(); ++k) {
    for (int p = 0; p < total; ++p) {
      const int f = order[static_cast<std::size_t>(p)];
      if (!cuts.global_pos[k].get_flat(f)) pos_cut_last_escape[k] = p;
    }
  }

  current = Solution(m, n);
  row_lhs.assign(rows.size(), 0.0);
  block_load.assign(static_cast<std::size_t>(m), 0.0);
  group_used.assign(static_cast<std::size_t>(std::max(1, num_groups)), 0);
}

double Engine::bound_at(int depth) const {
  double b = z_fixed;
  const bool weighted = !flat_weights.empty();
  // Unused groups contribute their best member that still fits its block.
  for (int g = 0; g < num_groups; ++g) {
    if (group_used[static_cast<std::size_t>(g)]) continue;
    for (int f : group_members[static_cast<std::size_t>(g)]) {
      if (position_of[static_cast<std::size_t>(f)] < depth) continue;
      if (weighted) {
        const int blk = f / instance->n;
        if (block_load[static_cast<std::size_t>(blk)] + flat_weights[static_cast<std::size_t>(f)] > 1.0 + 1e-9) {
          continue;
        }
      }
      b += flat_values[static_cast<std::size_t>(f)];
      break;  // members sorted by value
    }
  }
  // Ungrouped variables: fractional fill of the remaining block capacity, or
  // a plain value sum when no weight rows are present.
  for (int blk = 0; blk < instance->m; ++blk) {
    const auto& list = block_ratio[static_cast<std::size_t>(blk)];
    if (list.empty()) continue;
    if (!weighted) {
      for (int f : list) {
        if (position_of[static_cast<std::size_t>(f)] >= depth) b += flat_values[static_cast<std::size_t>(f)];
      }
      continue;
    }
    double room = 1.0 + 1e-9 - block_load[static_cast<std::size_t>(blk)];
    for (int f : list) {
      if (room <= 0.0) break;
      if (position_of[static_cast<std::size_t>(f)] < depth) continue;
      const double w = flat_weights[static_cast<std::size_t>(f)];
      if (w <= room) {
        b += flat_values[static_cast<std::size_t>(f)];
        room -= w;
      } else {
        b += flat_values[static_cast<std::size_t>(f)] * room / std::max(w, 1e-12);
        room = 0.0;
      }
    }
  }
  return b;
}

bool Engine::can_complete(int depth) const {
  const auto& rows = instance->space.rows;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double lo = row_lhs[r] + row_min_suffix[r][static_cast<std::size_t>(depth)];
    const double hi = row_lhs[r] + row_max_suffix[r][static_cast<std::size_t>(depth)];
    if (rows[r].sense != Sense::GreaterEqual && lo > rows[r].rhs + 1e-9) return false;
    if (rows[r].sense != Sense::LessEqual && hi < rows[r].rhs - 1e-9) return false;
  }
  // A negative cut is certainly violated once its pattern is contained in
  // the fixed part of the block (unfixed bits read as zero).
  for (std::size_t k = 0; k < cuts.per_neg.size(); ++k) {
    for (const auto& pattern : cuts.per_neg[k]) {
      if (pattern.subset_of(current.blocks[k])) return false;
    }
  }
  if (mode == EngineMode::Surrogate) {
    for (std::size_t k = 0; k < cuts.global_pos.size(); ++k) {
      if (pos_cut_escaped_depth[k] > depth && pos_cut_last_escape[k] < depth) return false;
    }
  }
  return true;
}

bool Engine::leaf_accept() {
  // Exact verification of everything the pruning only approximated.
  if (!instance->space.contains(current)) return false;
  for (std::size_t k = 0; k < cuts.per_neg.size(); ++k) {
    for (const auto& pattern : cuts.per_neg[k]) {
      if (pattern.subset_of(current.blocks[k])) return false;
    }
  }
  if (mode == EngineMode::Surrogate) {
    for (int i = 0; i < instance->m; ++i) {
      if (current.blocks[static_cast<std::size_t>(i)].dot((*weight_rows)[static_cast<std::size_t>(i)]) > 1.0 + 1e-9) {
        return false;
      }
    }
    for (const auto& sp : cuts.global_pos) {
      if (current.subset_of(sp)) return false;
    }
  } else {
    if (z_fixed > ub_cap + 1e-9) return false;
    for (int i = 0; i < instance->m; ++i) {
      ++lp_checks;
      if (!(*witnesses)[static_cast<std::size_t>(i)].admits(current.blocks[static_cast<std::size_t>(i)])) {
        return false;
      }
    }
  }
  return true;
}

void Engine::dfs(int depth) {
  const int total = instance->m * instance->n;
  if (limit_hit) {
    unexplored_bound = std::max(unexplored_bound, bound_at(depth));
    return;
  }
  if (!can_complete(depth)) return;
  const double bound = bound_at(depth);
  if (found && bound <= best_z + 1e-9) return;

  if (depth == total) {
    if (leaf_accept()) {
      const double z = current.value(instance->values);
      if (!found || z > best_z || (z == best_z && current.lex_less(best))) {
        found = true;
        best_z = z;
        best = current;
      }
    }
    return;
  }

  if (++nodes > node_limit) {
    limit_hit = true;
    unexplored_bound = std::max(unexplored_bound, bound);
    return;
  }

  const int f = order[static_cast<std::size_t>(depth)];
  const int block = f / instance->n;
  const int g = group_of[static_cast<std::size_t>(f)];
  const auto& rows = instance->space.rows;

  // One branch first: high-value incumbents early improve pruning.
  for (int bit = 1; bit >= 0; --bit) {
    if (bit == 1) {
      const double wf = flat_weights.empty() ? 0.0 : flat_weights[static_cast<std::size_t>(f)];
      if (block_load[static_cast<std::size_t>(block)] + wf > 1.0 + 1e-9) {
        continue;  // nonnegative weights only grow the load
      }
      current.set_flat(f, true);
      z_fixed += flat_values[static_cast<std::size_t>(f)];
      block_load[static_cast<std::size_t>(block)] += wf;
      if (g >= 0) ++group_used[static_cast<std::size_t>(g)];
      for (std::size_t r = 0; r < rows.size(); ++r) row_lhs[r] += rows[r].coeffs[static_cast<std::size_t>(f)];
      std::vector<int> newly_escaped;
      if (mode == EngineMode::Surrogate) {
        for (std::size_t k = 0; k < cuts.global_pos.size(); ++k) {
          if (!cuts.global_pos[k].get_flat(f) && pos_cut_escaped_depth[k] > depth) {
            pos_cut_escaped_depth[k] = depth;
            newly_escaped.push_back(static_cast<int>(k));
          }
        }
      }

      dfs(depth + 1);

      for (int k : newly_escaped) pos_cut_escaped_depth[static_cast<std::size_t>(k)] = std::numeric_limits<int>::max();
      for (std::size_t r = 0; r < rows.size(); ++r) row_lhs[r] -= rows[r].coeffs[static_cast<std::size_t>(f)];
      if (g >= 0) --group_used[static_cast<std::size_t>(g)];
      block_load[static_cast<std::size_t>(block)] -= flat_weights.empty() ? 0.0 : flat_weights[static_cast<std::size_t>(f)];
      z_fixed -= flat_values[static_cast<std::size_t>(f)];
      current.set_flat(f, false);
    } else {
      dfs(depth + 1);
    }
  }
}

void Engine::run_dfs() {
  setup();
  dfs(0);
}

/// Best-first search for the bounding model: nodes pop in bound order, so
/// the first accepted complete assignment is the model optimum and the top
/// bound on a node-limit abort is a valid (degraded) upper bound.
void Engine::run_best_first() {
  setup();
  const int m = instance->m;
  const int total = m * instance->n;
  const auto& rows = instance->space.rows;

  // Plain-value nodes: the variable assignment is carried inline and the
  // derived state (row sums, group usage, loads) is rebuilt on pop. Bounds
  // are clipped at the cap: qualified candidates never exceed it, so the
  // clipped priority stays admissible and the plateau above it collapses.
  struct Node {
    double bound = 0.0;
    double z_fixed = 0.0;
    std::int64_t seq = 0;
    int depth = 0;
    std::array<std::array<std::uint64_t, Bits::kWords>, 10> masks{};
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound < b.bound;
      if (a.depth != b.depth) return a.depth < b.depth;  // dive on bound plateaus
      return a.seq > b.seq;
    }
  };
  if (m > 10) throw std::invalid_argument("bounding search supports at most 10 constraints");
  std::priority_queue<Node, std::vector<Node>, Worse> queue;
  std::int64_t seq = 0;

  const auto snapshot = [&](int depth) {
    Node node;
    node.seq = seq++;
    node.depth = depth;
    node.z_fixed = z_fixed;
    node.bound = std::min(bound_at(depth), ub_cap);
    for (int blk = 0; blk < m; ++blk) node.masks[static_cast<std::size_t>(blk)] = current.blocks[static_cast<std::size_t>(blk)].words;
    return node;
  };
  const auto restore = [&](const Node& node) {
    z_fixed = node.z_fixed;
    for (int blk = 0; blk < m; ++blk) current.blocks[static_cast<std::size_t>(blk)].words = node.masks[static_cast<std::size_t>(blk)];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double lhs = 0.0;
      for (int f = 0; f < total; ++f) {
        if (rows[r].coeffs[static_cast<std::size_t>(f)] != 0.0 && current.get_flat(f)) {
          lhs += rows[r].coeffs[static_cast<std::size_t>(f)];
        }
      }
      row_lhs[r] = lhs;
    }
    std::fill(group_used.begin(), group_used.end(), 0);
    for (int g = 0; g < num_groups; ++g) {
      for (int f : group_members[static_cast<std::size_t>(g)]) {
        if (current.get_flat(f)) ++group_used[static_cast<std::size_t>(g)];
      }
    }
    if (!flat_weights.empty()) {
      for (int blk = 0; blk < m; ++blk) {
        block_load[static_cast<std::size_t>(blk)] =
            current.blocks[static_cast<std::size_t>(blk)].dot((*weight_rows)[static_cast<std::size_t>(blk)]);
      }
    }
  };

  queue.push(snapshot(0));
  while (!queue.empty()) {
    if (queue.top().bound <= stop_below) {
      // Everything left is beneath the caller's useful precision; the top
      // bound is still a valid upper bound for it.
      limit_hit = true;
      unexplored_bound = queue.top().bound;
      return;
    }
    if (++nodes > node_limit) {
      limit_hit = true;
      unexplored_bound = std::max(unexplored_bound, queue.top().bound);
      return;
    }
    const Node node = queue.top();
    queue.pop();
    restore(node);

    if (node.depth == total) {
      if (leaf_accept()) {
        // Bound-ordered pops: the first accepted completion is optimal.
        found = true;
        best_z = current.value(instance->values);
        best = current;
        return;
      }
      continue;
    }
    if (!can_complete(node.depth)) continue;

    const int f = order[static_cast<std::size_t>(node.depth)];
    const int block = f / instance->n;
    const int g = group_of[static_cast<std::size_t>(f)];

    // Zero child.
    queue.push(snapshot(node.depth + 1));
    // One child. Admission is monotone in the block pattern, so a partial
    // block that no domain weight vector admits kills the whole subtree.
    const double wf = flat_weights.empty() ? 0.0 : flat_weights[static_cast<std::size_t>(f)];
    current.set_flat(f, true);
    ++lp_checks;
    const bool admissible =
        block_load[static_cast<std::size_t>(block)] + wf <= 1.0 + 1e-9 &&
        (*witnesses)[static_cast<std::size_t>(block)].admits(current.blocks[static_cast<std::size_t>(block)]);
    if (admissible) {
      z_fixed += flat_values[static_cast<std::size_t>(f)];
      block_load[static_cast<std::size_t>(block)] += wf;
      if (g >= 0) ++group_used[static_cast<std::size_t>(g)];
      for (std::size_t r = 0; r < rows.size(); ++r) row_lhs[r] += rows[r].coeffs[static_cast<std::size_t>(f)];
      if (can_complete(node.depth + 1)) queue.push(snapshot(node.depth + 1));
      for (std::size_t r = 0; r < rows.size(); ++r) row_lhs[r] -= rows[r].coeffs[static_cast<std::size_t>(f)];
      if (g >= 0) --group_used[static_cast<std::size_t>(g)];
      block_load[static_cast<std::size_t>(block)] -= wf;
      z_fixed -= flat_values[static_cast<std::size_t>(f)];
    }
    current.set_flat(f, false);
  }
}

DiscreteResult enumerate_space(const Instance& instance, const std::vector<std::vector<double>>* w,
                               const NoGoodCuts& cuts) {
  const int m = instance.m, n = instance.n;
  const int total = m * n;
  if (total > 26) {
    throw std::invalid_argument("discrete: enumeration backend supports m*n <= 26");
  }
  DiscreteResult result;
  result.status = DiscreteStatus::Infeasible;
  Solution x(m, n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    for (int f = 0; f < total; ++f) x.set_flat(f, (mask >> f) & 1u);
    if (!instance.space.contains(x)) continue;
    bool ok = true;
    if (w) {
      for (int i = 0; i < m && ok; ++i) {
        if (x.blocks[static_cast<std::size_t>(i)].dot((*w)[static_cast<std::size_t>(i)]) > 1.0 + 1e-9) ok = false;
      }
    }
    for (const auto& sp : cuts.global_pos) {
      if (!ok) break;
      if (x.subset_of(sp)) ok = false;
    }
    for (int i = 0; i < m && ok; ++i) {
      if (i >= static_cast<int>(cuts.per_neg.size())) break;
      for (const auto& sm : cuts.per_neg[static_cast<std::size_t>(i)]) {
        if (sm.subset_of(x.blocks[static_cast<std::size_t>(i)])) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    const double z = x.value(instance.values);
    if (result.status == DiscreteStatus::Infeasible || z > result.z ||
        (z == result.z && x.lex_less(result.x))) {
      result.status = DiscreteStatus::Optimal;
      result.z = z;
      result.x = x;
    }
  }
  result.nodes = std::int64_t{1} << total;
  return result;
}

}  // namespace

NoGoodCuts NoGoodCuts::from_pools(const LabeledPools& pools) {
  NoGoodCuts cuts;
  cuts.global_pos = pools.global_pos_points();
  cuts.per_neg.resize(static_cast<std::size_t>(pools.num_constraints()));
  for (int i = 0; i < pools.num_constraints(); ++i) {
    cuts.per_neg[static_cast<std::size_t>(i)] = pools.neg_points(i);
  }
  return cuts;
}

DiscreteResult solve_surrogate(const Instance& instance, const SurrogateWeights& w,
                               const NoGoodCuts& cuts, SearchBackend backend,
                               std::int64_t node_limit) {
  if (static_cast<int>(w.rows.size()) != instance.m) {
    throw std::invalid_argument("solve_surrogate: surrogate weight rows mismatch");
  }
  const NoGoodCuts reduced = reduce_cuts(cuts, instance.m);
  if (backend == SearchBackend::Enumerate && instance.m * instance.n <= 26) {
    return enumerate_space(instance, &w.rows, reduced);
  }
  Engine engine;
  engine.instance = &instance;
  engine.mode = EngineMode::Surrogate;
  engine.weight_rows = &w.rows;
  engine.cuts = reduced;
  engine.node_limit = node_limit;
  engine.run_dfs();

  DiscreteResult result;
  result.nodes = engine.nodes;
  if (engine.found) {
    result.status = engine.limit_hit ? DiscreteStatus::NodeLimit : DiscreteStatus::Optimal;
    result.x = engine.best;
    result.z = engine.best_z;
  } else {
    result.status = engine.limit_hit ? DiscreteStatus::NodeLimit : DiscreteStatus::Infeasible;
    result.z = -kInf;
  }
  return result;
}

DiscreteResult solve_with_weights(const Instance& instance,
                                  const std::vector<std::vector<double>>& weight_rows,
                                  SearchBackend backend, std::int64_t node_limit) {
  SurrogateWeights w;
  w.rows = weight_rows;
  return solve_surrogate(instance, w, NoGoodCuts{}, backend, node_limit);
}

UpperBoundResult compute_upper_bound(const Instance& instance, const LabeledPools& pools,
                                     std::int64_t node_limit, double ub_cap,
                                     BoundingMemory* memory, double stop_below) {
  const auto tick = std::chrono::steady_clock::now();
  std::vector<WeightWitness> witnesses;
  witnesses.reserve(static_cast<std::size_t>(instance.m));
  for (int i = 0; i < instance.m; ++i) {
    witnesses.emplace_back(instance.weight_domains[static_cast<std::size_t>(i)], pools.pos_points(i),
                           pools.neg_points(i), instance.n);
    if (memory && i < static_cast<int>(memory->failed_blocks.size())) {
      witnesses.back().seed_failed(memory->failed_blocks[static_cast<std::size_t>(i)]);
    }
  }

  NoGoodCuts cuts;
  cuts.per_neg.resize(static_cast<std::size_t>(instance.m));
  for (int i = 0; i < instance.m; ++i) cuts.per_neg[static_cast<std::size_t>(i)] = pools.neg_points(i);

  // The minima only grow with the pools, so a stale vector is still a valid
  // underestimate; refresh every few rounds.
  std::vector<std::vector<double>> relaxation;
  const bool refresh = !memory || memory->relaxation.size() != static_cast<std::size_t>(instance.m) ||
                       memory->rounds_since_refresh >= 8;
  if (refresh) {
    relaxation.resize(static_cast<std::size_t>(instance.m));
    for (int i = 0; i < instance.m; ++i) {
      relaxation[static_cast<std::size_t>(i)] = witnesses[static_cast<std::size_t>(i)].relaxation_weights();
    }
    if (memory) {
      memory->relaxation = relaxation;
      memory->rounds_since_refresh = 0;
    }
  } else {
    relaxation = memory->relaxation;
    ++memory->rounds_since_refresh;
  }
  for (int i = 0; i < instance.m; ++i) {
    witnesses[static_cast<std::size_t>(i)].set_relaxation(relaxation[static_cast<std::size_t>(i)]);
  }

  const auto tick_setup = std::chrono::steady_clock::now();
  Engine engine;
  engine.instance = &instance;
  engine.mode = EngineMode::Bounding;
  engine.cuts = reduce_cuts(cuts, instance.m);
  engine.witnesses = &witnesses;
  engine.weight_rows = &relaxation;
  engine.ub_cap = ub_cap;
  engine.stop_below = stop_below;
  engine.node_limit = node_limit;
  engine.run_best_first();
  const auto tick_search = std::chrono::steady_clock::now();

  if (memory) {
    memory->failed_blocks.resize(static_cast<std::size_t>(instance.m));
    for (int i = 0; i < instance.m; ++i) {
      memory->failed_blocks[static_cast<std::size_t>(i)] = witnesses[static_cast<std::size_t>(i)].take_failed();
    }
  }

  UpperBoundResult result;
  result.nodes = engine.nodes;
  result.lp_checks = engine.lp_checks;
  if (std::getenv("ISEO_BOUND_STATS")) {
    std::int64_t lp_total = 0;
    for (const auto& wit : witnesses) lp_total += wit.lp_calls();
    const double setup_ms = std::chrono::duration<double, std::milli>(tick_setup - tick).count();
    const double search_ms = std::chrono::duration<double, std::milli>(tick_search - tick_setup).count();
    std::fprintf(stderr,
                 "[bound] nodes=%lld leaves_checked=%lld lp_solves=%lld ub=%g degraded=%d setup_ms=%.1f search_ms=%.1f\n",
                 static_cast<long long>(engine.nodes), static_cast<long long>(engine.lp_checks),
                 static_cast<long long>(lp_total), engine.found ? engine.best_z : -1.0,
                 static_cast<int>(engine.limit_hit), setup_ms, search_ms);
  }
  if (engine.limit_hit) {
    result.degraded = true;
    result.ub = std::max(engine.found ? engine.best_z : -kInf, engine.unexplored_bound);
    return result;
  }
  if (!engine.found) {
    result.all_cut_off = true;
    result.ub = -kInf;
    return result;
  }
  result.ub = engine.best_z;
  result.has_witness = true;
  result.witness = engine.best;
  return result;
}

}  // namespace iseo
