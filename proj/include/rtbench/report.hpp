// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// Comparison reports: markdown tables, CSV/JSON exports and Tukey boxplot
// summaries. Everything here is a pure function of the sample sets.

#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "rtbench/error.hpp"
#include "rtbench/measure.hpp"
#include "rtbench/stats.hpp"

namespace rtbench {

struct ComparisonReport {
  std::string title;
  std::vector<SummaryRow> rows;  // ascending by mean, baseline first
  std::map<std::string, SampleSet> samples;
};

/// Summarizes and relativizes the sample sets and sorts the rows.
inline ComparisonReport make_report(std::string title, const std::vector<SampleSet>& sets) {
  ComparisonReport report;
  report.title = std::move(title);
  if (sets.empty()) return report;
  std::vector<std::pair<std::string, SummaryStats>> keyed;
  keyed.reserve(sets.size());
  for (const auto& set : sets) {
    if (report.samples.count(set.variant_name))
      throw ValidationError("duplicate variant name '" + set.variant_name + "'");
    keyed.emplace_back(set.variant_name, summarize(set));
    report.samples.emplace(set.variant_name, set);
  }
  report.rows = relativize(keyed);
  std::sort(report.rows.begin(), report.rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return faster_than(a.variant_name, a.stats, b.variant_name, b.stats);
  });
  return report;
}

namespace detail {

inline std::string markdown_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

inline std::string format_relative(const SummaryRow& row) {
  if (!row.relative_sigma) return fmt::format("{:.2f}", row.relative);
  return fmt::format("{:.2f} ± {:.2f}", row.relative, *row.relative_sigma);
}

/// Pipe table: Command | Mean [s] | Min [s] | Max [s] | Relative.
/// A non-empty title is emitted as a pandoc-style caption above the table.
inline std::string to_markdown(const ComparisonReport& report) {
  std::string out;
  if (!report.title.empty()) out += "Table: " + report.title + "\n\n";
  out += "| Command | Mean [s] | Min [s] | Max [s] | Relative |\n";
  out += "|:---|---:|---:|---:|---:|\n";
  for (const auto& row : report.rows) {
    const auto& s = row.stats;
    out += fmt::format("| {} | {:.3f} ± {:.3f} | {:.3f} | {:.3f} | {} |\n", detail::markdown_cell(row.variant_name),
                       s.mean, s.stddev, s.min, s.max, format_relative(row));
  }
  return out;
}

/// Shortest representation that parses back to the same double.
inline std::string exact(double x) { return fmt::format("{}", x); }

inline std::string to_csv(const ComparisonReport& report) {
  std::string out = "command,mean,stddev,min,max,relative,relative_sigma\n";
  for (const auto& row : report.rows) {
    const auto& s = row.stats;
    out += fmt::format("{},{},{},{},{},{},{}\n", detail::csv_field(row.variant_name), exact(s.mean), exact(s.stddev),
                       exact(s.min), exact(s.max), exact(row.relative),
                       row.relative_sigma ? exact(*row.relative_sigma) : std::string());
  }
  return out;
}

inline nlohmann::json to_json_value(const ComparisonReport& report) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& row : report.rows) {
    const auto& s = row.stats;
    nlohmann::json entry = {
        {"command", row.variant_name},
        {"mean", s.mean},
        {"stddev", s.stddev},
        {"min", s.min},
        {"max", s.max},
        {"n", s.n},
        {"relative", row.relative},
        {"relative_sigma", row.relative_sigma ? nlohmann::json(*row.relative_sigma) : nlohmann::json(nullptr)},
    };
    if (auto it = report.samples.find(row.variant_name); it != report.samples.end()) {
      entry["times"] = it->second.samples;
      entry["exit_codes"] = it->second.exit_codes;
    }
    results.push_back(std::move(entry));
  }
  return {{"title", report.title}, {"results", std::move(results)}};
}

inline std::string to_json(const ComparisonReport& report) { return to_json_value(report).dump(2) + "\n"; }

/// Rebuilds a report from a JSON export. Statistics are recomputed from the
/// embedded raw samples; the stored summary fields are ignored.
inline ComparisonReport report_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON export: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("results") || !doc["results"].is_array())
    throw ValidationError("invalid JSON export: missing 'results' array");
  std::string title = doc.value("title", std::string());
  std::vector<SampleSet> sets;
  std::size_t index = 0;
  for (const auto& entry : doc["results"]) {
    const std::string where = "results[" + std::to_string(index++) + "]";
    if (!entry.is_object() || !entry.contains("command") || !entry["command"].is_string())
      throw ValidationError("invalid JSON export: " + where + " has no 'command'");
    if (!entry.contains("times") || !entry["times"].is_array() || entry["times"].empty())
      throw ValidationError("invalid JSON export: " + where + " has no 'times'");
    SampleSet set;
    set.variant_name = entry["command"].get<std::string>();
    for (const auto& t : entry["times"]) {
      if (!t.is_number() || t.get<double>() < 0.0)
        throw ValidationError("invalid JSON export: " + where + " has a bad sample");
      set.samples.push_back(t.get<double>());
    }
    if (entry.contains("exit_codes")) {
      set.exit_codes = entry["exit_codes"].get<std::vector<int>>();
      if (set.exit_codes.size() != set.samples.size())
        throw ValidationError("invalid JSON export: " + where + " exit_codes/times length mismatch");
    } else {
      set.exit_codes.assign(set.samples.size(), 0);
    }
    sets.push_back(std::move(set));
  }
  return make_report(std::move(title), sets);
}

struct BoxplotSummary {
  std::string variant_name;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending
};

/// Quantile of sorted data, linear interpolation between order statistics
/// at position (n - 1) * p.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of empty data");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Tukey summary: whiskers reach the most extreme samples inside
/// [q1 - 1.5 IQR, q3 + 1.5 IQR] (never retreating inside the box); samples
/// beyond the fences are outliers.
inline BoxplotSummary boxplot_data(const SampleSet& set) {
  if (set.samples.empty()) throw ValidationError("variant '" + set.variant_name + "' has no samples");
  std::vector<double> sorted = set.samples;
  std::sort(sorted.begin(), sorted.end());

  BoxplotSummary box;
  box.variant_name = set.variant_name;
  box.q1 = quantile_sorted(sorted, 0.25);
  box.median = quantile_sorted(sorted, 0.5);
  box.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = box.q3 - box.q1;
  const double fence_low = box.q1 - 1.5 * iqr;
  const double fence_high = box.q3 + 1.5 * iqr;

  auto first_in = std::lower_bound(sorted.begin(), sorted.end(), fence_low);
  auto past_in = std::upper_bound(sorted.begin(), sorted.end(), fence_high);
  box.outliers.assign(sorted.begin(), first_in);
  box.outliers.insert(box.outliers.end(), past_in, sorted.end());

  box.whisker_low = (first_in == past_in) ? box.q1 : std::min(*first_in, box.q1);
  box.whisker_high = (first_in == past_in) ? box.q3 : std::max(*std::prev(past_in), box.q3);
  return box;
}

inline nlohmann::json to_json_value(const BoxplotSummary& box) {
  return {{"command", box.variant_name}, {"q1", box.q1},
          {"median", box.median},        {"q3", box.q3},
          {"whisker_low", box.whisker_low}, {"whisker_high", box.whisker_high},
          {"outliers", box.outliers}};
}

/// Boxplot summaries for every row of the report, in row order.
inline std::string boxplot_json(const ComparisonReport& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : report.rows)
    if (auto it = report.samples.find(row.variant_name); it != report.samples.end())
      out.push_back(to_json_value(boxplot_data(it->second)));
  return out.dump(2) + "\n";
}

}  // namespace rtbench
