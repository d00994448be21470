// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtbench/workloads/noop.hpp"

int main() { return rtbench::noop::noop_main(); }
