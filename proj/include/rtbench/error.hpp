// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rtbench {

/// Base class of every error raised by the harness and the workloads.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments, detected before anything is timed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A spawned command (measured or prepare hook) could not run or failed.
class ExecutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace rtbench
