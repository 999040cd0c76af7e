#include "iseo/report.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace iseo {

using nlohmann::json;

namespace {

struct Accumulator {
  int runs = 0;
  int opt = 0, thres = 0, feas = 0, feas_known = 0;
  double gap_sum = 0.0;
  int gap_n = 0;
  double err_sum = 0.0;
  int err_n = 0;
  double calls = 0.0, iters = 0.0, time_s = 0.0;
  double ct = 0.0, it = 0.0, tt = 0.0;
  int thres_n = 0;
  double co = 0.0, io = 0.0, to = 0.0;
  int opt_n = 0;
};

std::optional<double> mean(double sum, int n) {
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::string fmt(const std::optional<double>& v, int precision = 3) {
  if (!v) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << *v;
  return out.str();
}

std::string fmt(double v, int precision = 1) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

}  // namespace

std::vector<ReportRow> aggregate_summaries(const std::vector<std::string>& summary_jsons) {
  std::map<std::tuple<std::string, std::string, std::string>, Accumulator> acc;

  for (const auto& text : summary_jsons) {
    const json j = json::parse(text);
    const auto& inst = j.at("instance");
    const auto& cfg = j.at("config");
    const auto& res = j.at("results");
    const auto& flags = res.at("flags");

    std::string group = inst.at("kind").get<std::string>();
    if (inst.at("m").get<int>() > 1) {
      group += " " + std::to_string(inst.at("m").get<int>()) + "x" + std::to_string(inst.at("n").get<int>());
    }
    const auto key = std::make_tuple(group, cfg.at("separator").get<std::string>(),
                                     cfg.at("sampler").get<std::string>());
    Accumulator& a = acc[key];
    ++a.runs;
    if (flags.at("error_zero").get<bool>()) ++a.opt;
    if (flags.at("reached_threshold").get<bool>()) ++a.thres;
    if (!flags.at("final_feasible").is_null()) {
      ++a.feas_known;
      if (flags.at("final_feasible").get<bool>()) ++a.feas;
    }
    if (!res.at("gap_pct").is_null()) {
      a.gap_sum += res.at("gap_pct").get<double>();
      ++a.gap_n;
    }
    if (!res.at("error_pct").is_null()) {
      a.err_sum += res.at("error_pct").get<double>();
      ++a.err_n;
    }
    a.calls += res.at("calls_total").get<double>();
    a.iters += res.at("iterations").get<double>();
    a.time_s += res.at("time_s").get<double>();
    if (!res.at("to_threshold").is_null()) {
      const auto& ms = res.at("to_threshold");
      a.ct += ms.at("calls").get<double>();
      a.it += ms.at("iters").get<double>();
      a.tt += ms.at("time_s").get<double>();
      ++a.thres_n;
    }
    if (!res.at("to_optimum").is_null()) {
      const auto& ms = res.at("to_optimum");
      a.co += ms.at("calls").get<double>();
      a.io += ms.at("iters").get<double>();
      a.to += ms.at("time_s").get<double>();
      ++a.opt_n;
    }
  }

  std::vector<ReportRow> rows;
  for (const auto& [key, a] : acc) {
    ReportRow row;
    row.group = std::get<0>(key);
    row.separator = std::get<1>(key);
    row.sampler = std::get<2>(key);
    row.runs = a.runs;
    row.opt_count = a.opt;
    row.thres_count = a.thres;
    row.feas_count = a.feas;
    row.feas_known = a.feas_known;
    row.gap_pct = mean(a.gap_sum, a.gap_n);
    row.error_pct = mean(a.err_sum, a.err_n);
    row.calls = a.calls / a.runs;
    row.iters = a.iters / a.runs;
    row.time_s = a.time_s / a.runs;
    row.calls_to_thres = mean(a.ct, a.thres_n);
    row.iters_to_thres = mean(a.it, a.thres_n);
    row.time_to_thres = mean(a.tt, a.thres_n);
    row.calls_to_opt = mean(a.co, a.opt_n);
    row.iters_to_opt = mean(a.io, a.opt_n);
    row.time_to_opt = mean(a.to, a.opt_n);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_report(const std::vector<ReportRow>& rows, ReportFormat format) {
  static const char* kHeaders[] = {"group",     "separ.", "sampl.",   "#opt",      "#thres",
                                   "#feas",     "gap%",   "error%",   "calls",     "iters",
                                   "time_s",    "calls2thres", "iters2thres", "time2thres",
                                   "calls2opt", "iters2opt",   "time2opt"};
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    cells.push_back(r.group);
    cells.push_back(r.separator);
    cells.push_back(r.sampler);
    cells.push_back(std::to_string(r.opt_count) + "/" + std::to_string(r.runs));
    cells.push_back(std::to_string(r.thres_count) + "/" + std::to_string(r.runs));
    cells.push_back(r.feas_known > 0 ? std::to_string(r.feas_count) + "/" + std::to_string(r.feas_known)
                                     : std::string("-"));
    cells.push_back(fmt(r.gap_pct));
    cells.push_back(fmt(r.error_pct));
    cells.push_back(fmt(r.calls));
    cells.push_back(fmt(r.iters));
    cells.push_back(fmt(r.time_s, 2));
    cells.push_back(fmt(r.calls_to_thres, 1));
    cells.push_back(fmt(r.iters_to_thres, 1));
    cells.push_back(fmt(r.time_to_thres, 2));
    cells.push_back(fmt(r.calls_to_opt, 1));
    cells.push_back(fmt(r.iters_to_opt, 1));
    cells.push_back(fmt(r.time_to_opt, 2));
    table.push_back(std::move(cells));
  }

  std::ostringstream out;
  const std::size_t ncols = std::size(kHeaders);
  if (format == ReportFormat::Csv) {
    for (std::size_t c = 0; c < ncols; ++c) out << kHeaders[c] << (c + 1 < ncols ? "," : "\n");
    for (const auto& row : table) {
      for (std::size_t c = 0; c < ncols; ++c) out << row[c] << (c + 1 < ncols ? "," : "\n");
    }
    return out.str();
  }

  std::vector<std::size_t> widths(ncols);
  for (std::size_t c = 0; c < ncols; ++c) widths[c] = std::string(kHeaders[c]).size();
  for (const auto& row : table) {
    for (std::size_t c = 0; c < ncols; ++c) widths[c] = std::max(widths[c], row[c].size());
  }

  const auto emit_row = [&](const std::vector<std::string>& cells, const char* sep) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (format == ReportFormat::Markdown) out << "| ";
      out << std::left << std::setw(static_cast<int>(widths[c])) << cells[c];
      out << (format == ReportFormat::Markdown ? " " : sep);
    }
    if (format == ReportFormat::Markdown) out << "|";
    out << "\n";
  };

  std::vector<std::string> headers(kHeaders, kHeaders + ncols);
  emit_row(headers, "  ");
  if (format == ReportFormat::Markdown) {
    for (std::size_t c = 0; c < ncols; ++c) out << "|" << std::string(widths[c] + 2, '-');
    out << "|\n";
  }
  for (const auto& row : table) emit_row(row, "  ");
  return out.str();
}

}  // namespace iseo
