// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// Suite configuration files.
//
// Line-oriented key = value text. Keys before the first [variant] header
// describe the protocol and outputs; each [variant] block adds one row of
// the test matrix, in file order.
//
//   # startup matrix
//   title      = Startup
//   warmups    = 5
//   iterations = 50
//   prepare    = sync; echo 3 > /proc/sys/vm/drop_caches
//   high_priority = true
//   cpu_set    = 2,4-7
//   outputs    = markdown, csv, json, boxplot
//   output_dir = results
//
//   [variant]
//   name    = Native x86-musl
//   command = ./noop.musl
//   workdir = /opt/bench
//   env     = RUST_BACKTRACE=0
//
// Other global keys: use_shell, tolerate_failure (true/false). `command`
// is split into argv like a shell would (quotes and backslashes, no
// expansion). `prepare` is always handed to /bin/sh -c. `env` may repeat.
// Lines whose first non-blank character is '#' are comments.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rtbench/error.hpp"
#include "rtbench/measure.hpp"

namespace rtbench {

enum class OutputFormat { markdown, csv, json, boxplot };

inline std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::markdown: return "markdown";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::boxplot: return "boxplot";
  }
  return "?";
}

struct SuiteConfig {
  std::string title;
  MeasurementProtocol protocol;
  std::vector<ExecutionVariant> variants;
  std::set<OutputFormat> outputs{OutputFormat::markdown};
  std::filesystem::path output_dir = ".";

  void validate() const {
    protocol.validate();
    if (variants.empty()) throw ValidationError("suite has no variants");
    if (outputs.empty()) throw ValidationError("suite has no output formats");
    std::set<std::string> names;
    for (const auto& v : variants) {
      v.validate();
      if (!names.insert(v.name).second) throw ValidationError("duplicate variant name '" + v.name + "'");
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Shell-like word splitting without expansion: whitespace separates
/// words, '...' is literal, "..." honors \" and \\, and a backslash outside
/// quotes escapes the next character.
inline std::vector<std::string> split_command(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  bool in_word = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ' ' || c == '\t') {
      if (in_word) words.push_back(std::exchange(current, {}));
      in_word = false;
      continue;
    }
    in_word = true;
    if (c == '\\') {
      if (++i == text.size()) throw ValidationError("trailing backslash in command");
      current += text[i];
    } else if (c == '\'') {
      auto end = text.find('\'', i + 1);
      if (end == std::string_view::npos) throw ValidationError("unterminated single quote in command");
      current.append(text.substr(i + 1, end - i - 1));
      i = end;
    } else if (c == '"') {
      for (++i;; ++i) {
        if (i >= text.size()) throw ValidationError("unterminated double quote in command");
        if (text[i] == '"') break;
        if (text[i] == '\\' && i + 1 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) ++i;
        current += text[i];
      }
    } else {
      current += c;
    }
  }
  if (in_word) words.push_back(std::move(current));
  return words;
}

/// Parses "0,2,4-7" into {0,2,4,5,6,7}.
inline std::set<unsigned> parse_cpu_list(std::string_view text) {
  std::set<unsigned> cpus;
  auto number = [&](std::string_view s) {
    s = detail::trim(s);
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw ValidationError("invalid cpu index '" + std::string(s) + "'");
    return value;
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (auto dash = item.find('-'); dash != std::string_view::npos) {
      unsigned lo = number(item.substr(0, dash));
      unsigned hi = number(item.substr(dash + 1));
      if (lo > hi) throw ValidationError("invalid cpu range '" + std::string(detail::trim(item)) + "'");
      if (hi >= CPU_SETSIZE) throw ValidationError("cpu index " + std::to_string(hi) + " is out of range");
      for (unsigned c = lo; c <= hi; ++c) cpus.insert(c);
    } else {
      cpus.insert(number(item));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cpus;
}

inline OutputFormat parse_output_format(std::string_view name) {
  if (name == "markdown" || name == "md") return OutputFormat::markdown;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "boxplot") return OutputFormat::boxplot;
  throw ValidationError("unknown output format '" + std::string(name) + "'");
}

inline std::set<OutputFormat> parse_output_list(std::string_view text) {
  std::set<OutputFormat> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto item = detail::trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.insert(parse_output_format(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool parse_bool(std::string_view text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ValidationError("expected true or false, got '" + std::string(text) + "'");
}

inline unsigned parse_count(std::string_view text) {
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("expected a nonnegative integer, got '" + std::string(text) + "'");
  return value;
}

/// Parses config text. `source` prefixes error messages ("source:line: ...").
inline SuiteConfig parse_config(std::string_view text, const std::string& source = "<config>") {
  SuiteConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::size_t> variant_lines;
  ExecutionVariant* variant = nullptr;

  auto fail = [&](const std::string& message) -> ValidationError {
    return ValidationError(source + ":" + std::to_string(line_no) + ": " + message);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line != "[variant]") throw fail("unknown section " + std::string(line));
      config.variants.emplace_back();
      variant = &config.variants.back();
      variant_lines.push_back(line_no);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    try {
      if (variant) {
        if (key == "name") {
          variant->name = value;
        } else if (key == "command") {
          variant->argv = split_command(value);
        } else if (key == "workdir") {
          variant->workdir = std::filesystem::path(std::string(value));
        } else if (key == "env") {
          auto sep = value.find('=');
          if (sep == std::string_view::npos || sep == 0) throw ValidationError("expected env = NAME=VALUE");
          variant->env[std::string(value.substr(0, sep))] = std::string(value.substr(sep + 1));
        } else {
          throw ValidationError("unknown variant key '" + key + "'");
        }
        continue;
      }
      auto& p = config.protocol;
      if (key == "title") {
        config.title = value;
      } else if (key == "warmups") {
        p.warmups = parse_count(value);
      } else if (key == "iterations") {
        p.iterations = parse_count(value);
        if (p.iterations == 0) throw ValidationError("iterations must be at least 1");
      } else if (key == "prepare") {
        if (value.empty()) throw ValidationError("prepare command must not be empty");
        p.prepare = std::vector<std::string>{kShell, "-c", std::string(value)};
      } else if (key == "high_priority") {
        p.high_priority = parse_bool(value);
      } else if (key == "cpu_set") {
        p.cpu_set = parse_cpu_list(value);
      } else if (key == "use_shell") {
        p.use_shell = parse_bool(value);
      } else if (key == "tolerate_failure") {
        p.tolerate_failure = parse_bool(value);
      } else if (key == "outputs") {
        config.outputs = parse_output_list(value);
        if (config.outputs.empty()) throw ValidationError("at least one output format is required");
      } else if (key == "output_dir") {
        config.output_dir = std::string(value);
      } else {
        throw ValidationError("unknown key '" + key + "'");
      }
    } catch (const ValidationError& e) {
      throw fail(e.what());
    }
  }

  std::set<std::string> names;
  for (std::size_t i = 0; i < config.variants.size(); ++i) {
    line_no = variant_lines[i];
    const auto& v = config.variants[i];
    if (v.name.empty()) throw fail("variant has no name");
    if (v.argv.empty()) throw fail("variant '" + v.name + "' has no command");
    if (!names.insert(v.name).second) throw fail("duplicate variant name '" + v.name + "'");
  }
  if (config.variants.empty()) throw ValidationError(source + ": no [variant] blocks");
  config.validate();
  return config;
}

inline SuiteConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace rtbench
