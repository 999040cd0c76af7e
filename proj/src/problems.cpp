#include "iseo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iseo/rng.hpp"

namespace iseo {

namespace {

CombinatorialSpace free_space(int m, int n) {
  CombinatorialSpace space;
  space.num_vars = m * n;
  return space;
}

}  // namespace

Instance gen_knapsack(KnapsackKind kind, int n, int h, std::uint64_t seed) {
  if (h < 1 || h > 30) throw std::invalid_argument("gen_knapsack: h must lie in 1..30");
  if (n < 1) throw std::invalid_argument("gen_knapsack: n must be positive");

  auto rng = make_stream(seed, "knapsack");
  std::uniform_int_distribution<int> raw(1, 10000);

  std::vector<int> weights(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) weights[static_cast<std::size_t>(j)] = raw(rng);

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int w = weights[static_cast<std::size_t>(j)];
    switch (kind) {
      case KnapsackKind::Uncorrelated:
        values[static_cast<std::size_t>(j)] = raw(rng);
        break;
      case KnapsackKind::WeaklyCorrelated: {
        std::uniform_int_distribution<int> window(w - 1000, w + 1000);
        values[static_cast<std::size_t>(j)] = std::max(1, window(rng));
        break;
      }
      case KnapsackKind::StronglyCorrelated:
        values[static_cast<std::size_t>(j)] = w + 1000;
        break;
    }
  }

  double weight_sum = 0.0;
  for (int w : weights) weight_sum += w;
  const double capacity = h * weight_sum / 31.0;

  std::vector<double> hidden(static_cast<std::size_t>(n));
  int clamped = 0;
  for (int j = 0; j < n; ++j) {
    const double ratio = weights[static_cast<std::size_t>(j)] / capacity;
    if (ratio > 1.0) ++clamped;
    hidden[static_cast<std::size_t>(j)] = std::min(ratio, 1.0);
  }

  Instance inst;
  switch (kind) {
    case KnapsackKind::Uncorrelated: inst.kind = "knap-u"; break;
    case KnapsackKind::WeaklyCorrelated: inst.kind = "knap-w"; break;
    case KnapsackKind::StronglyCorrelated: inst.kind = "knap-s"; break;
  }
  inst.m = 1;
  inst.n = n;
  inst.values = {values};
  inst.hidden_weights = {{hidden}};
  inst.space = free_space(1, n);
  inst.weight_domains.resize(1);
  inst.space.tags["h"] = std::to_string(h);
  if (clamped > 0) inst.space.tags["clamped_weights"] = std::to_string(clamped);
  inst.validate();
  return inst;
}

void validate_catalog(const CourseCatalog& catalog) {
  const int d = catalog.size();
  for (int i = 0; i < d; ++i) {
    const auto& ci = catalog.courses[static_cast<std::size_t>(i)];
    std::set<int> prereq_union;
    for (const auto& set : ci.prerequisite_sets) {
      if (set.empty()) throw std::invalid_argument("catalog: empty prerequisite set for course " + std::to_string(i));
      for (int j : set) {
        if (j < 0 || j >= d || j == i) {
          throw std::invalid_argument("catalog: prerequisite index out of range for course " + std::to_string(i));
        }
        prereq_union.insert(j);
      }
    }
    for (int j : prereq_union) {
      if (ci.corequisites.count(j) || ci.alternatives.count(j)) {
        throw std::invalid_argument("catalog: rule (a) violated, relation sets overlap for course " +
                                    std::to_string(i));
      }
    }
    for (int j : ci.corequisites) {
      if (ci.alternatives.count(j)) {
        throw std::invalid_argument("catalog: rule (a) violated, relation sets overlap for course " +
                                    std::to_string(i));
      }
    }
    for (int j : prereq_union) {
      const auto& cj = catalog.courses[static_cast<std::size_t>(j)];
      for (const auto& set : cj.prerequisite_sets) {
        if (std::find(set.begin(), set.end(), i) != set.end()) {
          throw std::invalid_argument("catalog: rule (b) violated, mutual prerequisites " +
                                      std::to_string(i) + " and " + std::to_string(j));
        }
      }
    }
    for (int j : ci.corequisites) {
      if (j < 0 || j >= d || !catalog.courses[static_cast<std::size_t>(j)].corequisites.count(i)) {
        throw std::invalid_argument("catalog: rule (c) violated, corequisites not symmetric for course " +
                                    std::to_string(i));
      }
    }
    for (int j : ci.alternatives) {
      if (j < 0 || j >= d || !catalog.courses[static_cast<std::size_t>(j)].alternatives.count(i)) {
        throw std::invalid_argument("catalog: rule (d) violated, alternatives not symmetric for course " +
                                    std::to_string(i));
      }
    }
  }
}

CourseCatalog gen_catalog(int n_courses, std::uint64_t seed, CatalogDensity density) {
  if (n_courses < 1) throw std::invalid_argument("gen_catalog: need at least one course");
  auto rng = make_stream(seed, "catalog");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> lecture(2, 5), lab(0, 2), prep(4, 10);

  CourseCatalog catalog;
  catalog.courses.resize(static_cast<std::size_t>(n_courses));
  for (auto& c : catalog.courses) {
    c.lecture_credits = lecture(rng);
    c.lab_credits = lab(rng);
    c.prep_credits = prep(rng);
  }

  std::vector<std::set<int>> related(static_cast<std::size_t>(n_courses));
  const auto relate = [&](int a, int b) {
    related[static_cast<std::size_t>(a)].insert(b);
    related[static_cast<std::size_t>(b)].insert(a);
  };

  for (int i = 1; i < n_courses; ++i) {
    auto& ci = catalog.courses[static_cast<std::size_t>(i)];
    if (coin(rng) < density.prerequisite) {
      std::uniform_int_distribution<int> num_sets(1, 2);
      const int sets = std::min(num_sets(rng), i);
      for (int s = 0; s < sets; ++s) {
        std::uniform_int_distribution<int> set_size(1, std::min(3, i));
        const int size = set_size(rng);
        std::set<int> chosen;
        std::uniform_int_distribution<int> pick(0, i - 1);
        for (int attempt = 0; attempt < 16 && static_cast<int>(chosen.size()) < size; ++attempt) {
          const int j = pick(rng);
          if (!related[static_cast<std::size_t>(i)].count(j)) chosen.insert(j);
        }
        if (!chosen.empty()) {
          ci.prerequisite_sets.emplace_back(chosen.begin(), chosen.end());
          for (int j : chosen) relate(i, j);
        }
      }
    }
    // Lower-index partners only, so prerequisites can never become mutual.
    if (coin(rng) < density.corequisite && i >= 1) {
      std::uniform_int_distribution<int> pick(0, i - 1);
      const int j = pick(rng);
      if (!related[static_cast<std::size_t>(i)].count(j)) {
        ci.corequisites.insert(j);
        catalog.courses[static_cast<std::size_t>(j)].corequisites.insert(i);
        relate(i, j);
      }
    }
    if (coin(rng) < density.alternative && i >= 1) {
      std::uniform_int_distribution<int> pick(0, i - 1);
      const int j = pick(rng);
      if (!related[static_cast<std::size_t>(i)].count(j)) {
        ci.alternatives.insert(j);
        catalog.courses[static_cast<std::size_t>(j)].alternatives.insert(i);
        relate(i, j);
      }
    }
  }
  validate_catalog(catalog);
  return catalog;
}

Instance gen_cspp(const CourseCatalog& catalog, std::uint64_t seed) {
  validate_catalog(catalog);
  const int d = catalog.size();
  constexpr double kBudget = 1700.0;

  auto rng = make_stream(seed, "cspp");
  std::uniform_real_distribution<double> sigma_draw(1.0, 28.0);

  std::vector<double> values(static_cast<std::size_t>(d));
  std::vector<double> hidden(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto& c = catalog.courses[static_cast<std::size_t>(i)];
    const double eta = 14.0 * (c.lecture_credits + c.lab_credits) / kBudget;
    const double mu = 14.0 * c.prep_credits;
    const double sigma = sigma_draw(rng);
    std::normal_distribution<double> normal(mu, sigma);
    double xi = normal(rng);
    while (xi < 0.0 || xi > kBudget) xi = normal(rng);  // truncation by rejection
    xi /= kBudget;
    hidden[static_cast<std::size_t>(i)] = std::min(eta + xi, 1.0);
    values[static_cast<std::size_t>(i)] = c.lecture_credits + c.lab_credits + c.prep_credits;
  }

  Instance inst;
  inst.kind = "cspp";
  inst.m = 1;
  inst.n = d;
  inst.values = {values};
  inst.hidden_weights = {{hidden}};
  inst.space = free_space(1, d);
  inst.weight_domains.resize(1);

  const auto row_with = [&](std::initializer_list<std::pair<int, double>> entries, Sense sense,
                            double rhs) {
    LinearRow row;
    row.coeffs.assign(static_cast<std::size_t>(d), 0.0);
    for (const auto& [idx, coef] : entries) row.coeffs[static_cast<std::size_t>(idx)] = coef;
    row.sense = sense;
    row.rhs = rhs;
    inst.space.rows.push_back(std::move(row));
  };

  for (int i = 0; i < d; ++i) {
    const auto& c = catalog.courses[static_cast<std::size_t>(i)];
    for (const auto& pset : c.prerequisite_sets) {
      LinearRow row;
      row.coeffs.assign(static_cast<std::size_t>(d), 0.0);
      row.coeffs[static_cast<std::size_t>(i)] = 1.0;
      for (int j : pset) row.coeffs[static_cast<std::size_t>(j)] = -1.0;
      row.sense = Sense::LessEqual;
      row.rhs = 0.0;
      inst.space.rows.push_back(std::move(row));  // x_i <= sum of the set
    }
    for (int j : c.corequisites) {
      if (j > i) row_with({{i, 1.0}, {j, -1.0}}, Sense::Equal, 0.0);  // once per pair
    }
    for (int j : c.alternatives) {
      if (j > i) row_with({{i, 1.0}, {j, 1.0}}, Sense::LessEqual, 1.0);
    }
  }
  inst.validate();
  return inst;
}

std::vector<Instance> parse_gap(const std::string& text) {
  std::istringstream in(text);
  long token_count = 0;
  const auto next_int = [&](const char* what) {
    long long value;
    if (!(in >> value)) {
      throw std::invalid_argument("gap parse error: expected " + std::string(what) + " at token " +
                                  std::to_string(token_count));
    }
    ++token_count;
    return value;
  };

  const long long problems = next_int("problem count");
  if (problems < 1 || problems > 10000) {
    throw std::invalid_argument("gap parse error: implausible problem count");
  }
  std::vector<Instance> instances;
  for (long long p = 0; p < problems; ++p) {
    const int m = static_cast<int>(next_int("agent count"));
    const int n = static_cast<int>(next_int("job count"));
    if (m < 1 || n < 1) throw std::invalid_argument("gap parse error: nonpositive dimensions");

    std::vector<std::vector<double>> values(static_cast<std::size_t>(m),
                                            std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<double>(next_int("value"));
    }
    std::vector<std::vector<double>> raw(static_cast<std::size_t>(m),
                                         std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<double>(next_int("weight"));
    }
    std::vector<double> capacity(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      capacity[static_cast<std::size_t>(i)] = static_cast<double>(next_int("capacity"));
      if (capacity[static_cast<std::size_t>(i)] <= 0.0) {
        throw std::invalid_argument("gap parse error: nonpositive capacity");
      }
    }

    Instance inst;
    inst.kind = "gap";
    inst.m = m;
    inst.n = n;
    inst.values = values;
    std::vector<std::vector<double>> hidden(static_cast<std::size_t>(m),
                                            std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        hidden[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            std::min(raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / capacity[static_cast<std::size_t>(i)], 1.0);
      }
    }
    inst.hidden_weights = hidden;
    inst.space.num_vars = m * n;
    for (int j = 0; j < n; ++j) {
      LinearRow row;  // each job assigned to at most one agent
      row.coeffs.assign(static_cast<std::size_t>(m * n), 0.0);
      for (int i = 0; i < m; ++i) row.coeffs[static_cast<std::size_t>(i * n + j)] = 1.0;
      row.sense = Sense::LessEqual;
      row.rhs = 1.0;
      inst.space.rows.push_back(std::move(row));
    }
    inst.space.tags["problem_index"] = std::to_string(p + 1);
    inst.weight_domains.resize(static_cast<std::size_t>(m));
    inst.validate();
    instances.push_back(std::move(inst));
  }
  return instances;
}

std::string gen_gap_orlib_text(int problems, int m, int n, std::uint64_t seed) {
  auto rng = make_stream(seed, "gap-orlib");
  std::uniform_int_distribution<int> value(15, 25);
  std::uniform_int_distribution<int> weight(5, 25);

  std::ostringstream out;
  out << problems << "\n";
  for (int p = 0; p < problems; ++p) {
    out << m << " " << n << "\n";
    std::vector<std::vector<int>> w(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        out << value(rng) << (j + 1 == n ? "\n" : " ");
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = weight(rng);
        out << w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] << (j + 1 == n ? "\n" : " ");
      }
    }
    for (int i = 0; i < m; ++i) {
      int row_sum = 0;
      for (int j = 0; j < n; ++j) row_sum += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const int cap = std::max(1, static_cast<int>(std::lround(0.8 * row_sum / m)));
      out << cap << (i + 1 == m ? "\n" : " ");
    }
  }
  return out.str();
}

Instance AdversarialFamily::with_subset(const std::set<int>& subset) const {
  if (static_cast<int>(subset.size()) != C + 1) {
    throw std::invalid_argument("adversarial family: subset must have exactly C+1 items");
  }
  for (int j : subset) {
    if (j < 0 || j >= n) throw std::invalid_argument("adversarial family: item index out of range");
  }
  Instance variant = base;
  auto& hidden = (*variant.hidden_weights)[0];
  for (int j : subset) hidden[static_cast<std::size_t>(j)] = 1.0 / (C + 1);
  return variant;
}

AdversarialFamily gen_adversarial(int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("gen_adversarial: eps must lie in (0,1)");
  const int C = static_cast<int>(std::ceil(1.0 / eps)) - 1;
  if (C < 1) throw std::invalid_argument("gen_adversarial: eps too large, C vanishes");
  if (n <= C + 1) throw std::invalid_argument("gen_adversarial: need n > C+1");

  AdversarialFamily family;
  family.C = C;
  family.n = n;
  family.base.kind = "adversarial";
  family.base.m = 1;
  family.base.n = n;
  family.base.values = {std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  family.base.hidden_weights = {{std::vector<double>(static_cast<std::size_t>(n), 1.0 / C)}};
  family.base.space = free_space(1, n);
  family.base.weight_domains.resize(1);
  family.base.validate();
  return family;
}

}  // namespace iseo
