/**
 * @file instance.hpp
 * @brief Problem data model: objective values, hidden weights, known
 *        combinatorial structure and surrogate weight domains.
 */

#ifndef ISEO_INSTANCE_HPP
#define ISEO_INSTANCE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iseo/bits.hpp"

namespace iseo {

enum class Sense { LessEqual, Equal, GreaterEqual };

std::string sense_to_string(Sense s);
Sense sense_from_string(const std::string& s);

/// One linear row a.x {<=,=,>=} rhs over the flattened m*n variables.
struct LinearRow {
  std::vector<double> coeffs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  bool satisfied(double lhs, double tol = 1e-9) const {
    switch (sense) {
      case Sense::LessEqual: return lhs <= rhs + tol;
      case Sense::Equal: return std::abs(lhs - rhs) <= tol;
      case Sense::GreaterEqual: return lhs >= rhs - tol;
    }
    return false;
  }
};

/// Known combinatorial structure X of the problem.
struct CombinatorialSpace {
  int num_vars = 0;
  std::vector<LinearRow> rows;
  std::map<std::string, std::string> tags;
  bool possibly_empty = false;

  bool contains(const Solution& x, double tol = 1e-9) const;

  /// Rows whose support lies entirely inside block i, re-indexed to 0..n-1.
  std::vector<LinearRow> block_rows(int m, int n, int i) const;
};

/// Extra halfspaces a.w <= b restricting one surrogate weight domain,
/// always in addition to the box 0 <= w <= 1.
struct DomainCut {
  std::vector<double> a;
  double b = 0.0;
};

struct WeightDomain {
  std::vector<DomainCut> cuts;

  bool contains(const std::vector<double>& w, double tol = 1e-7) const;
};

/// A full problem: m unknown knapsack constraints over n variables each,
/// a known combinatorial space, and optional hidden true weights used only
/// by simulated oracles.
struct Instance {
  std::string kind = "custom";
  int m = 0;
  int n = 0;
  std::vector<std::vector<double>> values;
  std::optional<std::vector<std::vector<double>>> hidden_weights;
  CombinatorialSpace space;
  std::vector<WeightDomain> weight_domains;

  /// Checks all structural invariants; throws std::invalid_argument with the
  /// violated rule named. Weight-domain non-emptiness is checked by LP.
  void validate() const;

  std::string to_json() const;
  static Instance from_json(const std::string& text);

  void save(const std::string& path) const;
  static Instance load(const std::string& path);
};

/// Current surrogate weights, one row per unknown constraint.
struct SurrogateWeights {
  std::vector<std::vector<double>> rows;

  SurrogateWeights() = default;
  SurrogateWeights(int m, int n)
      : rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n), 0.0)) {}
};

}  // namespace iseo

#endif  // ISEO_INSTANCE_HPP
