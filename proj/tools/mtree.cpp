// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string_view>
#include <vector>

#include "rtbench/workloads/mtree.hpp"

int main(int argc, char** argv) {
  std::vector<std::string_view> args(argv + 1, argv + argc);
  return rtbench::mtree::mtree_main(args, std::cout, std::cerr);
}
