// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// Startup probe: prints one fixed line and exits. Arguments are ignored.

#pragma once

#include <cstdio>

namespace rtbench::noop {

inline constexpr char kGreeting[] = "Hello World!\n";

inline int noop_main(std::FILE* out = stdout) {
  return std::fputs(kGreeting, out) < 0 ? 1 : 0;
}

}  // namespace rtbench::noop
