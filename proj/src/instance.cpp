#include "iseo/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iseo/linear_system.hpp"
#include "iseo/lp.hpp"

namespace iseo {

using nlohmann::json;

std::string sense_to_string(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "<=";
}

Sense sense_from_string(const std::string& s) {
  if (s == "<=") return Sense::LessEqual;
  if (s == "=" || s == "==") return Sense::Equal;
  if (s == ">=") return Sense::GreaterEqual;
  throw std::invalid_argument("unknown row sense: " + s);
}

bool CombinatorialSpace::contains(const Solution& x, double tol) const {
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (int f = 0; f < num_vars; ++f) {
      if (row.coeffs[static_cast<std::size_t>(f)] != 0.0 && x.get_flat(f)) {
        lhs += row.coeffs[static_cast<std::size_t>(f)];
      }
    }
    if (!row.satisfied(lhs, tol)) return false;
  }
  return true;
}

std::vector<LinearRow> CombinatorialSpace::block_rows(int m, int n, int i) const {
  std::vector<LinearRow> result;
  for (const auto& row : rows) {
    bool local = true;
    for (int f = 0; f < num_vars && local; ++f) {
      if (row.coeffs[static_cast<std::size_t>(f)] != 0.0 && f / n != i) local = false;
    }
    if (!local) continue;
    LinearRow r;
    r.coeffs.assign(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) r.coeffs[static_cast<std::size_t>(j)] = row.coeffs[static_cast<std::size_t>(i * n + j)];
    r.sense = row.sense;
    r.rhs = row.rhs;
    result.push_back(std::move(r));
  }
  (void)m;
  return result;
}

bool WeightDomain::contains(const std::vector<double>& w, double tol) const {
  for (double v : w) {
    if (v < -tol || v > 1.0 + tol) return false;
  }
  for (const auto& cut : cuts) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < cut.a.size(); ++j) lhs += cut.a[j] * w[j];
    if (lhs > cut.b + tol) return false;
  }
  return true;
}

void Instance::validate() const {
  if (m <= 0 || n <= 0) throw std::invalid_argument("instance: m and n must be positive");
  if (n > kMaxBits) {
    throw std::invalid_argument("instance: block size exceeds supported maximum of " +
                                std::to_string(kMaxBits));
  }
  if (static_cast<int>(values.size()) != m) {
    throw std::invalid_argument("instance: values must have m rows");
  }
  for (const auto& row : values) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("instance: every value row must have n entries");
    }
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("instance: values must be finite and nonnegative");
      }
    }
  }
  if (hidden_weights) {
    if (static_cast<int>(hidden_weights->size()) != m) {
      throw std::invalid_argument("instance: hidden_weights must have m rows");
    }
    for (const auto& row : *hidden_weights) {
      if (static_cast<int>(row.size()) != n) {
        throw std::invalid_argument("instance: every hidden weight row must have n entries");
      }
      for (double w : row) {
        if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
          throw std::invalid_argument("instance: hidden weights must lie in [0,1]");
        }
      }
    }
  }
  if (space.num_vars != m * n) {
    throw std::invalid_argument("instance: space variable count must equal m*n");
  }
  for (const auto& row : space.rows) {
    if (static_cast<int>(row.coeffs.size()) != space.num_vars) {
      throw std::invalid_argument("instance: space row dimension mismatch");
    }
  }
  if (!space.possibly_empty && !space.contains(Solution::zeros(m, n))) {
    throw std::invalid_argument(
        "instance: space does not contain the all-zeros solution and is not "
        "flagged possibly-empty");
  }
  if (static_cast<int>(weight_domains.size()) != m) {
    throw std::invalid_argument("instance: weight_domains must have length m");
  }
  for (int i = 0; i < m; ++i) {
    const auto& dom = weight_domains[static_cast<std::size_t>(i)];
    LinearSystem sys = LinearSystem::box(n, 0.0, 1.0);
    for (const auto& cut : dom.cuts) {
      if (static_cast<int>(cut.a.size()) != n) {
        throw std::invalid_argument("instance: weight domain cut dimension mismatch");
      }
      sys.add_row(cut.a, Sense::LessEqual, cut.b);
    }
    if (!lp_feasible(sys).feasible) {
      throw std::invalid_argument("instance: weight domain " + std::to_string(i) + " is empty");
    }
  }
}

namespace {

json space_to_json(const CombinatorialSpace& space) {
  json rows = json::array();
  for (const auto& row : space.rows) {
    rows.push_back({{"coeffs", row.coeffs}, {"sense", sense_to_string(row.sense)}, {"rhs", row.rhs}});
  }
  json tags = json::object();
  for (const auto& [k, v] : space.tags) tags[k] = v;
  json j = {{"rows", rows}, {"tags", tags}};
  if (space.possibly_empty) j["possibly_empty"] = true;
  return j;
}

CombinatorialSpace space_from_json(const json& j, int num_vars) {
  CombinatorialSpace space;
  space.num_vars = num_vars;
  for (const auto& row : j.at("rows")) {
    LinearRow r;
    r.coeffs = row.at("coeffs").get<std::vector<double>>();
    r.sense = sense_from_string(row.at("sense").get<std::string>());
    r.rhs = row.at("rhs").get<double>();
    space.rows.push_back(std::move(r));
  }
  if (j.contains("tags")) {
    for (const auto& [k, v] : j.at("tags").items()) space.tags[k] = v.get<std::string>();
  }
  if (j.contains("possibly_empty")) space.possibly_empty = j.at("possibly_empty").get<bool>();
  return space;
}

}  // namespace

std::string Instance::to_json() const {
  json j;
  j["kind"] = kind;
  j["m"] = m;
  j["n"] = n;
  j["values"] = values;
  if (hidden_weights) j["hidden_weights"] = *hidden_weights;
  j["space"] = space_to_json(space);
  json domains = json::array();
  for (const auto& dom : weight_domains) {
    json cuts = json::array();
    for (const auto& cut : dom.cuts) cuts.push_back({{"a", cut.a}, {"b", cut.b}});
    domains.push_back(cuts);
  }
  j["weight_domains"] = domains;
  return j.dump(2);
}

Instance Instance::from_json(const std::string& text) {
  json j = json::parse(text);
  Instance inst;
  inst.kind = j.at("kind").get<std::string>();
  inst.m = j.at("m").get<int>();
  inst.n = j.at("n").get<int>();
  inst.values = j.at("values").get<std::vector<std::vector<double>>>();
  if (j.contains("hidden_weights") && !j.at("hidden_weights").is_null()) {
    inst.hidden_weights = j.at("hidden_weights").get<std::vector<std::vector<double>>>();
  }
  inst.space = space_from_json(j.at("space"), inst.m * inst.n);
  for (const auto& dom_json : j.at("weight_domains")) {
    WeightDomain dom;
    for (const auto& cut : dom_json) {
      dom.cuts.push_back(DomainCut{cut.at("a").get<std::vector<double>>(), cut.at("b").get<double>()});
    }
    inst.weight_domains.push_back(std::move(dom));
  }
  inst.validate();
  return inst;
}

void Instance::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json() << "\n";
}

Instance Instance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace iseo
