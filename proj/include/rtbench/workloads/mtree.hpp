// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

// Hash-tree workload.
//
// Perfect binary trees with unit leaves; every internal node's hash is the
// sum of its children's hashes. The driver follows the binary-trees
// benchmark shape: one stretch tree of depth n+1, one long-lived tree of
// depth n, and for d = 4, 6, ..., n a batch of 2^(n-d+4) short-lived trees.
// All printed values are powers of two, so the output is fully predictable.

#pragma once

#include <charconv>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace rtbench::mtree {

struct HashTreeNode {
  std::optional<std::uint64_t> value;  // leaves only
  std::optional<std::uint64_t> hash;
  std::unique_ptr<HashTreeNode> left;
  std::unique_ptr<HashTreeNode> right;

  bool is_leaf() const { return !left && !right; }
};

inline constexpr unsigned kMinDepth = 4;
inline constexpr unsigned kMaxDepth = 30;

/// Perfect tree of the given depth (2^(depth+1) - 1 nodes), leaves = 1.
inline std::unique_ptr<HashTreeNode> build_tree(unsigned depth) {
  auto node = std::make_unique<HashTreeNode>();
  if (depth == 0) {
    node->value = 1;
  } else {
    node->left = build_tree(depth - 1);
    node->right = build_tree(depth - 1);
  }
  return node;
}

/// Assigns hashes bottom-up and returns the root hash.
inline std::uint64_t compute_hash(HashTreeNode& node) {
  if (node.is_leaf()) {
    node.hash = node.value.value_or(0);
  } else {
    std::uint64_t sum = 0;
    if (node.left) sum += compute_hash(*node.left);
    if (node.right) sum += compute_hash(*node.right);
    node.hash = sum;
  }
  return *node.hash;
}

/// True iff every node carries a hash consistent with its children (or,
/// for a leaf, with its value).
inline bool check(const HashTreeNode& node) {
  if (!node.hash) return false;
  if (node.is_leaf()) return node.value && *node.hash == *node.value;
  if (!node.left || !node.right) return false;
  if (!check(*node.left) || !check(*node.right)) return false;
  return *node.hash == *node.left->hash + *node.right->hash;
}

namespace detail {

inline void usage(std::ostream& err) {
  err << "usage: mtree <depth>   (" << kMinDepth << " <= depth <= " << kMaxDepth << ")\n";
}

}  // namespace detail

/// Program entry: one positional depth n. Exit 0 when every tree checks,
/// 1 on usage errors, 2 on a failed check.
inline int mtree_main(std::span<const std::string_view> args, std::ostream& out, std::ostream& err) {
  if (args.size() != 1) {
    detail::usage(err);
    return 1;
  }
  unsigned n = 0;
  auto arg = args[0];
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
  if (arg.empty() || ec != std::errc() || ptr != arg.data() + arg.size() || n < kMinDepth || n > kMaxDepth) {
    detail::usage(err);
    return 1;
  }

  bool ok = true;
  {
    auto stretch = build_tree(n + 1);
    const auto h = compute_hash(*stretch);
    ok = ok && check(*stretch);
    out << "stretch tree of depth " << n + 1 << "\t check: " << h << "\n";
  }

  auto long_lived = build_tree(n);
  compute_hash(*long_lived);

  for (unsigned d = kMinDepth; d <= n; d += 2) {
    const std::uint64_t iterations = std::uint64_t{1} << (n - d + kMinDepth);
    std::uint64_t sum = 0;
    for (std::uint64_t i = 0; i < iterations; ++i) {
      auto tree = build_tree(d);
      sum += compute_hash(*tree);
      ok = ok && check(*tree);
    }
    out << iterations << "\t trees of depth " << d << "\t check: " << sum << "\n";
  }

  ok = ok && check(*long_lived);
  out << "long lived tree of depth " << n << "\t check: " << *long_lived->hash << "\n";
  out.flush();
  if (!ok) {
    err << "mtree: hash verification failed\n";
    return 2;
  }
  return 0;
}

}  // namespace rtbench::mtree
