// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rtbench/error.hpp"
#include "rtbench/measure.hpp"

namespace rtbench {

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, n - 1 denominator
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

/// One line of a comparison. The fastest variant has relative == 1 and no
/// relative_sigma.
struct SummaryRow {
  std::string variant_name;
  SummaryStats stats;
  double relative = 1.0;
  std::optional<double> relative_sigma;

  bool is_baseline() const { return !relative_sigma.has_value(); }
};

inline SummaryStats summarize(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("cannot summarize an empty sample list");
  SummaryStats s;
  s.n = samples.size();
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  // Rounding in the mean can push it a few ulps outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

inline SummaryStats summarize(const SampleSet& set) {
  if (set.samples.empty())
    throw ValidationError("variant '" + set.variant_name + "' has no samples");
  return summarize(std::span<const double>(set.samples));
}

/// Orders rows by mean, ties broken by name. The first element of a sorted
/// comparison is therefore always the baseline.
inline bool faster_than(const std::string& name_a, const SummaryStats& a, const std::string& name_b,
                        const SummaryStats& b) {
  if (a.mean != b.mean) return a.mean < b.mean;
  return name_a < name_b;
}

/// Relative factor of every row against the fastest one, with uncertainty
/// propagated as for a ratio of independent quantities:
///   sigma_r = r * sqrt((sd_i / mean_i)^2 + (sd_base / mean_base)^2)
/// Output keeps the input order.
inline std::vector<SummaryRow> relativize(const std::vector<std::pair<std::string, SummaryStats>>& rows) {
  if (rows.empty()) throw ValidationError("cannot relativize an empty comparison");
  for (const auto& [name, stats] : rows)
    if (!(stats.mean > 0.0))
      throw ValidationError("variant '" + name + "' has non-positive mean; relative factors are undefined");

  std::size_t base = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (faster_than(rows[i].first, rows[i].second, rows[base].first, rows[base].second)) base = i;

  const SummaryStats& b = rows[base].second;
  const double base_cv = b.stddev / b.mean;
  std::vector<SummaryRow> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SummaryRow row{rows[i].first, rows[i].second, 1.0, std::nullopt};
    if (i != base) {
      const SummaryStats& s = rows[i].second;
      row.relative = s.mean / b.mean;
      const double cv = s.stddev / s.mean;
      row.relative_sigma = row.relative * std::sqrt(cv * cv + base_cv * base_cv);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace rtbench
