// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// Process-level wall-clock measurement.
//
// A variant is an opaque command. Each iteration spawns it directly (no
// intermediate shell unless requested), captures its stdout/stderr into
// memory and times the interval from spawn to observed exit on the
// monotonic clock. Exactly one child is alive at any time.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sched.h>
#include <sys/resource.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtbench/error.hpp"

extern char** environ;

namespace rtbench {

/// One row of the test matrix: a display name and the command to time.
struct ExecutionVariant {
  std::string name;
  std::vector<std::string> argv;
  std::optional<std::filesystem::path> workdir;
  /// Additive overrides on top of the inherited environment.
  std::map<std::string, std::string> env;

  void validate() const {
    if (name.empty()) throw ValidationError("variant name must not be empty");
    if (argv.empty() || argv.front().empty())
      throw ValidationError("variant '" + name + "' has an empty command");
  }
};

struct MeasurementProtocol {
  unsigned warmups = 0;
  unsigned iterations = 10;
  /// Runs before every warmup and every timed iteration.
  std::optional<std::vector<std::string>> prepare;
  bool high_priority = false;
  std::optional<std::set<unsigned>> cpu_set;
  /// Run variant commands through /bin/sh -c (argv joined by spaces).
  bool use_shell = false;
  /// Record nonzero exits instead of aborting.
  bool tolerate_failure = false;

  void validate() const {
    if (iterations < 1) throw ValidationError("iterations must be at least 1");
    if (cpu_set) {
      if (cpu_set->empty()) throw ValidationError("cpu_set must not be empty");
      if (*cpu_set->rbegin() >= CPU_SETSIZE)
        throw ValidationError("cpu index " + std::to_string(*cpu_set->rbegin()) + " is out of range");
    }
    if (prepare && (prepare->empty() || prepare->front().empty()))
      throw ValidationError("prepare command must not be empty");
  }
};

/// Wall-clock samples of one variant, in execution order.
struct SampleSet {
  std::string variant_name;
  std::vector<double> samples;  // seconds
  std::vector<int> exit_codes;
};

struct RunResult {
  double seconds = 0.0;
  /// Exit status, or 128 + signal number when the child was killed.
  int exit_code = 0;
  std::string output;  // interleaved stdout + stderr
};

inline constexpr const char* kShell = "/bin/sh";

/// Locates the executable that posix_spawnp would run for `program`.
/// Names containing '/' are taken relative to `workdir` (or the current
/// directory); bare names are searched on PATH.
inline std::optional<std::filesystem::path> resolve_program(
    const std::string& program, const std::optional<std::filesystem::path>& workdir = std::nullopt) {
  namespace fs = std::filesystem;
  auto executable = [](const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (program.empty()) return std::nullopt;
  if (program.find('/') != std::string::npos) {
    fs::path p(program);
    if (p.is_relative() && workdir) p = *workdir / p;
    if (executable(p)) return p;
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::string_view search = path_env ? path_env : "/usr/local/bin:/usr/bin:/bin";
  while (true) {
    auto colon = search.find(':');
    std::string_view dir = search.substr(0, colon);
    fs::path candidate = fs::path(dir.empty() ? "." : std::string(dir)) / program;
    if (executable(candidate)) return candidate;
    if (colon == std::string_view::npos) break;
    search.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

/// The argv actually spawned for a variant under a protocol.
inline std::vector<std::string> effective_argv(const ExecutionVariant& variant,
                                               const MeasurementProtocol& protocol) {
  if (!protocol.use_shell) return variant.argv;
  std::string joined;
  for (const auto& token : variant.argv) {
    if (!joined.empty()) joined += ' ';
    joined += token;
  }
  return {kShell, "-c", joined};
}

namespace detail {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }

  int get() const { return fd_; }
  explicit operator bool() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

class SpawnActions {
 public:
  SpawnActions() { ::posix_spawn_file_actions_init(&actions_); }
  ~SpawnActions() { ::posix_spawn_file_actions_destroy(&actions_); }
  SpawnActions(const SpawnActions&) = delete;
  SpawnActions& operator=(const SpawnActions&) = delete;
  posix_spawn_file_actions_t* get() { return &actions_; }

 private:
  posix_spawn_file_actions_t actions_;
};

inline std::vector<std::string> merged_environment(const std::map<std::string, std::string>& overrides) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (char** entry = environ; entry && *entry; ++entry) {
    std::string_view kv(*entry);
    std::string key(kv.substr(0, kv.find('=')));
    if (auto it = overrides.find(key); it != overrides.end()) {
      out.push_back(key + "=" + it->second);
      seen.insert(key);
    } else {
      out.emplace_back(kv);
    }
  }
  for (const auto& [key, value] : overrides)
    if (!seen.count(key)) out.push_back(key + "=" + value);
  return out;
}

inline std::vector<char*> c_strings(std::vector<std::string>& strings) {
  std::vector<char*> out;
  out.reserve(strings.size() + 1);
  for (auto& s : strings) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

inline int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

// Reads whatever is available without blocking; returns false on EOF/error.
inline bool drain(int fd, std::string& sink) {
  std::array<char, 8192> buf;
  while (true) {
    ssize_t n = ::read(fd, buf.data(), buf.size());
    if (n > 0) {
      sink.append(buf.data(), static_cast<size_t>(n));
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return errno == EAGAIN || errno == EWOULDBLOCK;
  }
}

inline int open_pidfd(pid_t pid) {
#ifdef SYS_pidfd_open
  return static_cast<int>(::syscall(SYS_pidfd_open, pid, 0));
#else
  (void)pid;
  return -1;
#endif
}

/// Spawns `argv`, waits for exit and returns the elapsed wall time.
/// `label` names the command in error messages.
inline RunResult spawn_and_time(std::vector<std::string> argv, const std::optional<std::filesystem::path>& workdir,
                                const std::map<std::string, std::string>& env, const std::string& label) {
  int pipe_fds[2];
  if (::pipe2(pipe_fds, O_CLOEXEC) != 0)
    throw ExecutionError(label + ": pipe failed: " + std::strerror(errno));
  Fd read_end(pipe_fds[0]);
  Fd write_end(pipe_fds[1]);

  SpawnActions actions;
  ::posix_spawn_file_actions_addopen(actions.get(), STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  ::posix_spawn_file_actions_adddup2(actions.get(), write_end.get(), STDOUT_FILENO);
  ::posix_spawn_file_actions_adddup2(actions.get(), write_end.get(), STDERR_FILENO);
  if (workdir) ::posix_spawn_file_actions_addchdir_np(actions.get(), workdir->c_str());

  auto env_strings = merged_environment(env);
  auto envp = c_strings(env_strings);
  auto args = c_strings(argv);

  pid_t pid = -1;
  const auto start = std::chrono::steady_clock::now();
  int rc = ::posix_spawnp(&pid, args[0], actions.get(), nullptr, args.data(), envp.data());
  if (rc != 0) throw ExecutionError(label + ": cannot execute '" + argv[0] + "': " + std::strerror(rc));
  write_end.reset();
  ::fcntl(read_end.get(), F_SETFL, ::fcntl(read_end.get(), F_GETFL) | O_NONBLOCK);

  RunResult result;
  Fd pidfd(open_pidfd(pid));
  bool pipe_open = true;
  while (pidfd) {
    pollfd fds[2] = {{pidfd.get(), POLLIN, 0}, {read_end.get(), POLLIN, 0}};
    int n = ::poll(fds, pipe_open ? 2 : 1, -1);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pipe_open && (fds[1].revents & (POLLIN | POLLHUP | POLLERR)))
      pipe_open = drain(read_end.get(), result.output);
    if (fds[0].revents & POLLIN) break;
  }
  if (!pidfd) {
    // No pidfd support: EOF on the pipe is the exit signal.
    while (pipe_open) {
      pollfd fd{read_end.get(), POLLIN, 0};
      if (::poll(&fd, 1, -1) < 0 && errno != EINTR) break;
      pipe_open = drain(read_end.get(), result.output);
    }
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  const auto stop = std::chrono::steady_clock::now();
  if (pipe_open) drain(read_end.get(), result.output);

  result.seconds = std::chrono::duration<double>(stop - start).count();
  result.exit_code = decode_status(status);
  return result;
}

}  // namespace detail

/// Spawns the variant once and times it from spawn to exit.
/// The prepare hook is the caller's business.
inline RunResult run_once(const ExecutionVariant& variant, const MeasurementProtocol& protocol) {
  variant.validate();
  return detail::spawn_and_time(effective_argv(variant, protocol), variant.workdir, variant.env,
                                "variant '" + variant.name + "'");
}

/// Warmups (discarded), then `iterations` timed runs. The prepare hook runs
/// before each of them. Captured child output is written to `output_sink`
/// when given, otherwise discarded.
inline SampleSet run_benchmark(const ExecutionVariant& variant, const MeasurementProtocol& protocol,
                               std::ostream* output_sink = nullptr) {
  variant.validate();
  protocol.validate();

  auto prepare = [&](const std::string& phase) {
    if (!protocol.prepare) return;
    auto r = detail::spawn_and_time(*protocol.prepare, std::nullopt, {}, "prepare hook");
    if (output_sink) *output_sink << r.output;
    if (r.exit_code != 0)
      throw ExecutionError("variant '" + variant.name + "': prepare hook exited with code " +
                           std::to_string(r.exit_code) + " before " + phase);
  };

  for (unsigned i = 0; i < protocol.warmups; ++i) {
    prepare("warmup " + std::to_string(i));
    auto r = run_once(variant, protocol);
    if (output_sink) *output_sink << r.output;
    if (r.exit_code != 0 && !protocol.tolerate_failure)
      throw ExecutionError("variant '" + variant.name + "': warmup " + std::to_string(i) +
                           " exited with code " + std::to_string(r.exit_code));
  }

  SampleSet set;
  set.variant_name = variant.name;
  set.samples.reserve(protocol.iterations);
  set.exit_codes.reserve(protocol.iterations);
  for (unsigned i = 0; i < protocol.iterations; ++i) {
    prepare("iteration " + std::to_string(i));
    auto r = run_once(variant, protocol);
    if (output_sink) *output_sink << r.output;
    if (r.exit_code != 0 && !protocol.tolerate_failure)
      throw ExecutionError("variant '" + variant.name + "': iteration " + std::to_string(i) +
                           " exited with code " + std::to_string(r.exit_code));
    set.samples.push_back(r.seconds);
    set.exit_codes.push_back(r.exit_code);
  }
  return set;
}

enum class ControlStatus { not_requested, applied, degraded };

inline std::string_view to_string(ControlStatus s) {
  switch (s) {
    case ControlStatus::not_requested: return "not requested";
    case ControlStatus::applied: return "applied";
    case ControlStatus::degraded: return "degraded";
  }
  return "?";
}

/// Which scheduling controls took effect.
struct EnvironmentReport {
  ControlStatus priority = ControlStatus::not_requested;
  ControlStatus affinity = ControlStatus::not_requested;
  std::vector<std::string> warnings;

  std::string summary() const {
    if (priority == ControlStatus::not_requested && affinity == ControlStatus::not_requested)
      return "no controls requested";
    std::string out = "priority: ";
    out += to_string(priority);
    out += ", affinity: ";
    out += to_string(affinity);
    return out;
  }
};

inline constexpr int kHighPriorityNice = -10;

/// Raises scheduling priority and pins the harness (and therefore every
/// child) to the protocol's CPU set. Never throws on missing privileges;
/// unavailable controls are reported as degraded.
inline EnvironmentReport apply_environment(const MeasurementProtocol& protocol) {
  EnvironmentReport report;
  if (protocol.high_priority) {
    errno = 0;
    int current = ::getpriority(PRIO_PROCESS, 0);
    if (errno == 0 && current <= kHighPriorityNice) {
      report.priority = ControlStatus::applied;
    } else if (::setpriority(PRIO_PROCESS, 0, kHighPriorityNice) == 0) {
      report.priority = ControlStatus::applied;
    } else {
      report.priority = ControlStatus::degraded;
      report.warnings.push_back(std::string("cannot raise process priority: ") + std::strerror(errno));
    }
  }
  if (protocol.cpu_set && !protocol.cpu_set->empty()) {
    cpu_set_t mask;
    CPU_ZERO(&mask);
    bool in_range = true;
    for (unsigned cpu : *protocol.cpu_set) {
      if (cpu >= CPU_SETSIZE) {
        in_range = false;
        break;
      }
      CPU_SET(cpu, &mask);
    }
    if (in_range && ::sched_setaffinity(0, sizeof(mask), &mask) == 0) {
      report.affinity = ControlStatus::applied;
    } else {
      report.affinity = ControlStatus::degraded;
      report.warnings.push_back(std::string("cannot set CPU affinity: ") +
                                (in_range ? std::strerror(errno) : "cpu index out of range"));
    }
  }
  return report;
}

}  // namespace rtbench
