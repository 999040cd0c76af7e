/**
 * @file problems.hpp
 * @brief Benchmark instance generators and parsers: knapsack triples,
 *        college study plans, assignment problems and the adversarial
 *        worst-case family.
 */

#ifndef ISEO_PROBLEMS_HPP
#define ISEO_PROBLEMS_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "iseo/instance.hpp"

namespace iseo {

enum class KnapsackKind { Uncorrelated, WeaklyCorrelated, StronglyCorrelated };

/// Knapsack with integer raw weights in [1, 10000] and capacity
/// c = h * sum(weights) / 31, h in 1..30. Hidden weights are raw/c clamped
/// to 1. Value rules per kind: U uniform in [1,10000]; W uniform in
/// [w-1000, w+1000] clamped at 1; S equal to w+1000.
Instance gen_knapsack(KnapsackKind kind, int n, int h, std::uint64_t seed);

/// Course catalog with prerequisite sets, corequisites and alternatives.
struct CourseCatalog {
  struct Course {
    int lecture_credits = 0;      // a_i
    int lab_credits = 0;          // b_i
    int prep_credits = 0;         // c_i
    std::vector<std::vector<int>> prerequisite_sets;
    std::set<int> corequisites;
    std::set<int> alternatives;
  };
  std::vector<Course> courses;

  int size() const { return static_cast<int>(courses.size()); }
};

/// Throws std::invalid_argument naming the violated consistency rule:
/// (a) relation sets pairwise disjoint per course, (b) no mutual
/// prerequisites, (c) corequisites symmetric, (d) alternatives symmetric.
void validate_catalog(const CourseCatalog& catalog);

struct CatalogDensity {
  double prerequisite = 0.5;  // probability a course has prerequisite sets
  double corequisite = 0.15;
  double alternative = 0.15;
};

/// Random catalog: prerequisites only point to lower-index courses, paired
/// relations kept symmetric and disjoint. Always passes validate_catalog.
CourseCatalog gen_catalog(int n_courses, std::uint64_t seed, CatalogDensity density = {});

/// Study plan instance from a catalog. Hours budget B = 1700; the hidden
/// weight of course i is min(eta_i + xi_i, 1) with eta_i = 14(a_i+b_i)/B and
/// xi_i a truncated normal draw (mean 14 c_i, sigma uniform in [1,28])
/// supported on [0, B], divided by B. Value is a_i + b_i + c_i.
Instance gen_cspp(const CourseCatalog& catalog, std::uint64_t seed);

/// Parses an OR-Library assignment file: P problems; per problem m n, m*n
/// values, m*n raw weights, m capacities. Hidden weights are raw/capacity
/// clamped at 1; one partitioning row per job. Throws std::invalid_argument
/// with the token offset on malformed input.
std::vector<Instance> parse_gap(const std::string& text);

/// OR-Library-format text with the classic small-instance distributions
/// (weights uniform in [5,25], values in [15,25], capacity 0.8/m of the
/// agent's weight sum). Stand-in for benchmark files when none are supplied.
std::string gen_gap_orlib_text(int problems, int m, int n, std::uint64_t seed);

/// Worst-case family: base instance with all weights 1/C, C = ceil(1/eps)-1,
/// and a constructor that lowers the weights of a chosen (C+1)-subset to
/// 1/(C+1), making that subset the unique optimal solution.
struct AdversarialFamily {
  Instance base;
  int C = 0;
  int n = 0;

  /// Throws std::invalid_argument unless |subset| == C+1.
  Instance with_subset(const std::set<int>& subset) const;
};

AdversarialFamily gen_adversarial(int n, double eps);

}  // namespace iseo

#endif  // ISEO_PROBLEMS_HPP
