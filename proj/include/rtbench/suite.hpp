// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rtbench/config.hpp"
#include "rtbench/error.hpp"
#include "rtbench/measure.hpp"
#include "rtbench/report.hpp"

namespace rtbench {

struct SuiteHooks {
  std::ostream* log = nullptr;           // progress and environment warnings
  std::ostream* child_output = nullptr;  // captured child stdout/stderr
};

inline std::filesystem::path output_path(const std::filesystem::path& dir, OutputFormat format) {
  switch (format) {
    case OutputFormat::markdown: return dir / "results.md";
    case OutputFormat::csv: return dir / "results.csv";
    case OutputFormat::json: return dir / "results.json";
    case OutputFormat::boxplot: return dir / "boxplot.json";
  }
  return dir;
}

inline std::string render(const ComparisonReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::markdown: return to_markdown(report);
    case OutputFormat::csv: return to_csv(report);
    case OutputFormat::json: return to_json(report);
    case OutputFormat::boxplot: return boxplot_json(report);
  }
  return {};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

/// Writes every requested format into `dir`; returns the files written.
inline std::vector<std::filesystem::path> write_outputs(const ComparisonReport& report,
                                                        const std::set<OutputFormat>& formats,
                                                        const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (auto format : formats) {
    auto path = output_path(dir, format);
    write_text(path, render(report, format));
    written.push_back(std::move(path));
  }
  return written;
}

/// Fails if any variant's program cannot be found, before anything runs.
inline void check_programs(const SuiteConfig& config) {
  for (std::size_t i = 0; i < config.variants.size(); ++i) {
    const auto& v = config.variants[i];
    const std::string program = config.protocol.use_shell ? std::string(kShell) : v.argv.front();
    if (!resolve_program(program, config.protocol.use_shell ? std::nullopt : v.workdir))
      throw ValidationError("variant " + std::to_string(i + 1) + " of " + std::to_string(config.variants.size()) +
                            " ('" + v.name + "'): program '" + program + "' not found or not executable");
  }
  if (config.protocol.prepare && !resolve_program(config.protocol.prepare->front()))
    throw ValidationError("prepare program '" + config.protocol.prepare->front() + "' not found");
}

/// Runs the whole matrix in configuration order and writes the requested
/// outputs. A failing variant aborts the suite after the completed variants
/// are dumped to <output_dir>/partial.json.
inline ComparisonReport run_suite(const SuiteConfig& config, const SuiteHooks& hooks = {}) {
  config.validate();
  check_programs(config);

  const auto env = apply_environment(config.protocol);
  if (hooks.log) {
    *hooks.log << "environment: " << env.summary() << "\n";
    for (const auto& w : env.warnings) *hooks.log << "warning: " << w << "\n";
  }

  std::vector<SampleSet> sets;
  sets.reserve(config.variants.size());
  for (const auto& variant : config.variants) {
    if (hooks.log) *hooks.log << "benchmarking " << variant.name << "\n";
    try {
      sets.push_back(run_benchmark(variant, config.protocol, hooks.child_output));
    } catch (const ExecutionError& e) {
      std::string message = e.what();
      if (!sets.empty()) {
        auto partial = config.output_dir / "partial.json";
        write_text(partial, to_json(make_report(config.title, sets)));
        message += "; partial results written to " + partial.string();
      }
      throw ExecutionError(message);
    }
  }

  auto report = make_report(config.title, sets);
  write_outputs(report, config.outputs, config.output_dir);
  return report;
}

inline ComparisonReport replay_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

}  // namespace rtbench
