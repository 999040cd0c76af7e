// Command-line front end: generate instances, run the interactive loop,
// aggregate result tables, probe final surrogates.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iseo/problems.hpp"
#include "iseo/report.hpp"
#include "iseo/run.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

int cmd_gen(const std::string& problem, int n, int h, std::uint64_t seed, int courses,
            double eps, int gap_problems, int gap_m, const std::string& out_path) {
  iseo::Instance instance;
  if (problem == "knap-u" || problem == "knap-w" || problem == "knap-s") {
    const auto kind = problem == "knap-u" ? iseo::KnapsackKind::Uncorrelated
                      : problem == "knap-w" ? iseo::KnapsackKind::WeaklyCorrelated
                                            : iseo::KnapsackKind::StronglyCorrelated;
    instance = iseo::gen_knapsack(kind, n, h, seed);
  } else if (problem == "cspp") {
    instance = iseo::gen_cspp(iseo::gen_catalog(courses, seed), seed + 1);
  } else if (problem == "adversarial") {
    instance = iseo::gen_adversarial(n, eps).base;
  } else if (problem == "gap-orlib") {
    write_file(out_path, iseo::gen_gap_orlib_text(gap_problems, gap_m, n, seed));
    std::cout << "wrote " << out_path << "\n";
    return 0;
  } else {
    std::cerr << "unknown problem: " << problem << "\n";
    return 1;
  }
  instance.save(out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_parse_gap(const std::string& in_path, const std::string& out_dir) {
  const auto instances = iseo::parse_gap(read_file(in_path));
  fs::create_directories(out_dir);
  const std::string stem = fs::path(in_path).stem().string();
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const std::string path = (fs::path(out_dir) / (stem + "_" + std::to_string(k + 1) + ".json")).string();
    instances[k].save(path);
    std::cout << "wrote " << path << " (m=" << instances[k].m << ", n=" << instances[k].n << ")\n";
  }
  return 0;
}

struct RunOptions {
  std::vector<std::string> instances;
  std::string separator = "svm";
  std::string sampler = "sim";
  std::int64_t budget = 2000;
  double thr = 0.01;
  std::uint64_t seed = 0;
  std::string backend = "enum";
  std::int64_t node_limit = 50000;
  double time_limit = 600.0;
  int bounding_cadence = 1;
  std::string oracle = "sim";
  std::string out_dir = "runs";
  int jobs = 1;
  bool use_virtual_clock = false;
  std::string preset;
};

int cmd_run(RunOptions opts) {
  if (opts.preset == "desk") {
    opts.budget = 300;
    opts.time_limit = 600.0;
  }
  iseo::RunConfig config;
  config.separator = iseo::separator_from_string(opts.separator);
  config.sampler = iseo::sampler_from_string(opts.sampler);
  config.budget = opts.budget;
  config.threshold = opts.thr;
  config.seed = opts.seed;
  config.backend = opts.backend == "enum" ? iseo::SearchBackend::Enumerate
                                          : iseo::SearchBackend::BranchAndBound;
  config.node_limit = opts.node_limit;
  config.time_limit_s = opts.time_limit;
  config.bounding_cadence = opts.bounding_cadence;
  if (opts.use_virtual_clock) config.clock = iseo::virtual_clock();

  fs::create_directories(opts.out_dir);
  bool any_timeout = false, any_error = false;
  std::mutex io_mutex;

  const auto run_one = [&](const std::string& path) {
    try {
      iseo::Instance instance = iseo::Instance::load(path);
      std::shared_ptr<iseo::OracleBackend> backend;
      if (opts.oracle == "interactive") {
        instance.hidden_weights.reset();  // the human is the only source of labels
        backend = std::make_shared<iseo::InteractiveOracle>(std::cin, std::cout);
      } else {
        if (!instance.hidden_weights) {
          throw std::runtime_error("simulated oracle needs hidden weights: " + path);
        }
        backend = std::make_shared<iseo::SimulatedOracle>(*instance.hidden_weights);
      }
      iseo::OracleSuite suite(backend, instance.m, config.budget);
      iseo::RunRecord record = iseo::run(instance, suite, config);
      if (opts.oracle != "interactive") {
        record.final_feasible = iseo::final_feasibility_probe(instance, record.final_weights, suite);
        record.probe_queries = suite.probe_calls();
      }

      const std::string stem = fs::path(path).stem().string() + "." + opts.separator + "." +
                               opts.sampler + ".s" + std::to_string(opts.seed);
      write_file((fs::path(opts.out_dir) / (stem + ".csv")).string(), iseo::run_csv(record));
      write_file((fs::path(opts.out_dir) / (stem + ".summary.json")).string(),
                 iseo::summary_json(record, instance, config, fs::path(path).stem().string()));

      std::lock_guard<std::mutex> lock(io_mutex);
      if (record.timeout) any_timeout = true;
      std::cout << stem << ": lb=" << record.lb << " ub=" << record.ub
                << " calls=" << record.calls_total << " iters=" << record.iterations
                << (record.timeout ? " [timeout]" : "") << "\n";
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(io_mutex);
      any_error = true;
      std::cerr << "run failed for " << path << ": " << e.what() << "\n";
    }
  };

  if (opts.jobs <= 1 || opts.instances.size() <= 1 || opts.oracle == "interactive") {
    for (const auto& path : opts.instances) run_one(path);
  } else {
    std::vector<std::thread> workers;
    std::size_t next = 0;
    std::mutex next_mutex;
    for (int w = 0; w < opts.jobs; ++w) {
      workers.emplace_back([&]() {
        while (true) {
          std::size_t mine;
          {
            std::lock_guard<std::mutex> lock(next_mutex);
            if (next >= opts.instances.size()) return;
            mine = next++;
          }
          run_one(opts.instances[mine]);
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  if (any_error) return 2;
  if (any_timeout) return 3;
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& format) {
  std::vector<std::string> summaries;
  for (const auto& path : inputs) summaries.push_back(read_file(path));
  const auto rows = iseo::aggregate_summaries(summaries);
  const auto fmt = format == "csv" ? iseo::ReportFormat::Csv
                   : format == "md" ? iseo::ReportFormat::Markdown
                                    : iseo::ReportFormat::Text;
  std::cout << iseo::render_report(rows, fmt);
  return 0;
}

int cmd_probe(const std::string& run_path, const std::string& instance_path) {
  const json summary = json::parse(read_file(run_path));
  iseo::Instance instance = iseo::Instance::load(instance_path);
  if (!instance.hidden_weights) {
    std::cerr << "probe needs an instance with hidden weights (or use the run subcommand "
                 "with --oracle interactive)\n";
    return 2;
  }
  iseo::SurrogateWeights w;
  w.rows = summary.at("results").at("final_weights").get<std::vector<std::vector<double>>>();
  auto backend = std::make_shared<iseo::SimulatedOracle>(*instance.hidden_weights);
  iseo::OracleSuite suite(backend, instance.m, 1);
  const bool feasible = iseo::final_feasibility_probe(instance, w, suite);
  std::cout << "final surrogate optimization " << (feasible ? "returned a feasible" : "returned an infeasible")
            << " solution (" << suite.probe_calls() << " probe calls)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle-guided 0-1 optimization with learned surrogate constraints"};
  app.set_help_flag("--help", "print help");  // frees -h for the capacity index
  app.require_subcommand(1);

  // gen
  std::string gen_problem = "knap-u", gen_out = "instance.json";
  int gen_n = 15, gen_h = 10, gen_courses = 20, gen_gap_problems = 5, gen_gap_m = 5;
  double gen_eps = 0.5;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "generate a benchmark instance");
  gen->add_option("--problem", gen_problem, "knap-u|knap-w|knap-s|cspp|adversarial|gap-orlib");
  gen->add_option("--n", gen_n, "items / jobs per constraint");
  gen->add_option("--h", gen_h, "knapsack capacity index in 1..30");
  gen->add_option("--courses", gen_courses, "catalog size for cspp");
  gen->add_option("--eps", gen_eps, "approximation parameter for the adversarial family");
  gen->add_option("--problems", gen_gap_problems, "problem count for gap-orlib");
  gen->add_option("--m", gen_gap_m, "agent count for gap-orlib");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out", gen_out, "output path");

  // parse-gap
  std::string pg_in, pg_out = "instances";
  auto* pg = app.add_subcommand("parse-gap", "split an OR-Library file into instance JSONs");
  pg->add_option("--in", pg_in, "input text file")->required();
  pg->add_option("--out-dir", pg_out, "output directory");

  // run
  RunOptions ro;
  auto* rn = app.add_subcommand("run", "execute the interactive optimization loop");
  rn->add_option("--instance", ro.instances, "instance JSON file(s)")->required();
  rn->add_option("--separator", ro.separator, "svm|sep");
  rn->add_option("--sampler", ro.sampler, "sim|cut");
  rn->add_option("--budget", ro.budget, "oracle call limit per oracle");
  rn->add_option("--thr", ro.thr, "relative gap threshold");
  rn->add_option("--seed", ro.seed, "master seed (recorded in the summary)");
  rn->add_option("--backend", ro.backend, "enum|bnb for block-level subproblems");
  rn->add_option("--node-limit", ro.node_limit, "branch-and-bound node limit");
  rn->add_option("--time-limit", ro.time_limit, "wall clock limit in seconds");
  rn->add_option("--bounding-cadence", ro.bounding_cadence, "bound every k-th iteration");
  rn->add_option("--oracle", ro.oracle, "sim|interactive");
  rn->add_option("--out", ro.out_dir, "output directory");
  rn->add_option("--jobs", ro.jobs, "parallel runs");
  rn->add_option("--preset", ro.preset, "desk: budget 300, 600 s limit");
  rn->add_flag("--virtual-clock", ro.use_virtual_clock, "deterministic timings in summaries");

  // report
  std::vector<std::string> rep_in;
  std::string rep_format = "text";
  auto* rep = app.add_subcommand("report", "aggregate run summaries into a table");
  rep->add_option("--in", rep_in, "summary JSON files")->required();
  rep->add_option("--format", rep_format, "text|csv|md");

  // probe
  std::string probe_run, probe_instance;
  auto* pr = app.add_subcommand("probe", "re-optimize with final surrogates and ask the oracles");
  pr->add_option("--run", probe_run, "summary JSON of a finished run")->required();
  pr->add_option("--instance", probe_instance, "instance JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen(gen_problem, gen_n, gen_h, gen_seed, gen_courses, gen_eps, gen_gap_problems,
                     gen_gap_m, gen_out);
    }
    if (pg->parsed()) return cmd_parse_gap(pg_in, pg_out);
    if (rn->parsed()) return cmd_run(ro);
    if (rep->parsed()) return cmd_report(rep_in, rep_format);
    if (pr->parsed()) return cmd_probe(probe_run, probe_instance);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
