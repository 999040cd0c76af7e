/**
 * @file report.hpp
 * @brief Aggregation of run summaries into per-group result tables.
 */

#ifndef ISEO_REPORT_HPP
#define ISEO_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

namespace iseo {

/// One table row per (group, separator, sampler). Averages of the
/// milestone columns cover only qualifying runs (threshold reached /
/// solved to optimality), matching the table footnotes.
struct ReportRow {
  std::string group;  // kind, or "kind m x n" for multi-constraint problems
  std::string separator;
  std::string sampler;
  int runs = 0;
  int opt_count = 0;    // error == 0
  int thres_count = 0;  // gap threshold reached
  int feas_count = 0;   // final probe feasible
  int feas_known = 0;   // runs where the probe was recorded
  std::optional<double> gap_pct;    // mean over runs with finite gap
  std::optional<double> error_pct;  // mean over runs with known error
  double calls = 0.0;
  double iters = 0.0;
  double time_s = 0.0;
  std::optional<double> calls_to_thres, iters_to_thres, time_to_thres;
  std::optional<double> calls_to_opt, iters_to_opt, time_to_opt;
};

/// Parses run summary JSON documents and aggregates them.
std::vector<ReportRow> aggregate_summaries(const std::vector<std::string>& summary_jsons);

enum class ReportFormat { Text, Csv, Markdown };

std::string render_report(const std::vector<ReportRow>& rows, ReportFormat format);

}  // namespace iseo

#endif  // ISEO_REPORT_HPP
