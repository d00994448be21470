// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// rtbench: run a benchmark suite, replay a JSON export, or print a preset.
//
// Exit codes: 0 success, 1 validation error, 2 measured-command failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "rtbench/config.hpp"
#include "rtbench/presets.hpp"
#include "rtbench/report.hpp"
#include "rtbench/suite.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitExecution = 2;

struct RunOptions {
  std::string config_path;
  std::optional<unsigned> iterations;
  std::optional<unsigned> warmups;
  std::optional<std::string> prepare;
  std::optional<std::string> outputs;
  std::optional<std::string> output_dir;
  bool tolerate_failure = false;
  bool show_output = false;
  bool quiet = false;
};

struct ReplayOptions {
  std::string json_path;
  std::optional<std::string> outputs;
  std::string output_dir = ".";
};

int run_command(const RunOptions& opts) {
  auto config = rtbench::load_config(opts.config_path);
  if (opts.iterations) config.protocol.iterations = *opts.iterations;
  if (opts.warmups) config.protocol.warmups = *opts.warmups;
  if (opts.prepare) config.protocol.prepare = std::vector<std::string>{rtbench::kShell, "-c", *opts.prepare};
  if (opts.outputs) config.outputs = rtbench::parse_output_list(*opts.outputs);
  if (opts.output_dir) config.output_dir = *opts.output_dir;
  if (opts.tolerate_failure) config.protocol.tolerate_failure = true;

  rtbench::SuiteHooks hooks;
  if (!opts.quiet) hooks.log = &std::cerr;
  if (opts.show_output) hooks.child_output = &std::cerr;
  auto report = rtbench::run_suite(config, hooks);
  std::cout << rtbench::to_markdown(report);
  return 0;
}

int replay_command(const ReplayOptions& opts) {
  auto report = rtbench::replay_file(opts.json_path);
  if (opts.outputs) rtbench::write_outputs(report, rtbench::parse_output_list(*opts.outputs), opts.output_dir);
  std::cout << rtbench::to_markdown(report);
  return 0;
}

int presets_command(const std::string& workload) {
  auto preset = rtbench::find_preset(workload);
  if (!preset) {
    std::cerr << "rtbench: unknown preset '" << workload << "' (available:";
    for (const auto& w : rtbench::kPresetWorkloads) std::cerr << " " << w.name;
    std::cerr << ")\n";
    return kExitValidation;
  }
  std::cout << rtbench::preset_config(*preset);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-runtime process benchmarking harness"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Benchmark every variant of a suite config");
  run_cmd->add_option("config", run.config_path, "Suite configuration file")->required();
  run_cmd->add_option("-n,--iterations", run.iterations, "Timed iterations per variant");
  run_cmd->add_option("-w,--warmups", run.warmups, "Untimed warmup runs per variant");
  run_cmd->add_option("-p,--prepare", run.prepare, "Shell command run before every iteration");
  run_cmd->add_option("-e,--outputs", run.outputs, "Comma list of markdown,csv,json,boxplot");
  run_cmd->add_option("-o,--output-dir", run.output_dir, "Directory for exported files");
  run_cmd->add_flag("-i,--tolerate-failure", run.tolerate_failure, "Record nonzero exit codes instead of aborting");
  run_cmd->add_flag("--show-output", run.show_output, "Forward captured child output to stderr");
  run_cmd->add_flag("-q,--quiet", run.quiet, "No progress messages");

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Regenerate reports from a JSON export without running anything");
  replay_cmd->add_option("json", replay.json_path, "JSON export written by 'run'")->required();
  replay_cmd->add_option("-e,--outputs", replay.outputs, "Also write these formats");
  replay_cmd->add_option("-o,--output-dir", replay.output_dir, "Directory for exported files");

  std::string workload = "noop";
  auto* presets_cmd = app.add_subcommand("presets", "Print the ten-variant runtime matrix as a suite config");
  presets_cmd->add_option("workload", workload, "noop, mtree or deargon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*replay_cmd) return replay_command(replay);
    if (*presets_cmd) return presets_command(workload);
  } catch (const rtbench::ValidationError& e) {
    std::cerr << "rtbench: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rtbench::ExecutionError& e) {
    std::cerr << "rtbench: " << e.what() << "\n";
    return kExitExecution;
  } catch (const std::exception& e) {
    std::cerr << "rtbench: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
