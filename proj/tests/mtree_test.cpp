// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rtbench/workloads/mtree.hpp"

using namespace rtbench::mtree;

namespace {

// Oracles: plain traversals that never look at the hash fields.
std::uint64_t count_nodes(const HashTreeNode& n) {
  return 1 + (n.left ? count_nodes(*n.left) : 0) + (n.right ? count_nodes(*n.right) : 0);
}

std::uint64_t leaf_sum(const HashTreeNode& n) {
  if (n.is_leaf()) return n.value.value_or(0);
  return (n.left ? leaf_sum(*n.left) : 0) + (n.right ? leaf_sum(*n.right) : 0);
}

std::uint64_t count_leaves(const HashTreeNode& n) {
  if (n.is_leaf()) return 1;
  return count_leaves(*n.left) + count_leaves(*n.right);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string_view> args) {
  std::ostringstream out, err;
  int code = mtree_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(BuildTree, DepthZeroIsASingleLeaf) {
  auto t = build_tree(0);
  EXPECT_TRUE(t->is_leaf());
  EXPECT_EQ(t->value, 1u);
  EXPECT_FALSE(t->hash);
}

TEST(BuildTree, NodeAndLeafCounts) {
  auto t3 = build_tree(3);
  EXPECT_EQ(count_nodes(*t3), 15u);
  EXPECT_EQ(count_leaves(*t3), 8u);
  auto t18 = build_tree(18);
  EXPECT_EQ(count_nodes(*t18), 524287u);
}

TEST(ComputeHash, RootIsPowerOfTwo) {
  for (unsigned d = 0; d <= 20; ++d) {
    auto t = build_tree(d);
    const auto oracle = leaf_sum(*t);
    EXPECT_EQ(compute_hash(*t), oracle) << "depth " << d;
    EXPECT_EQ(oracle, std::uint64_t{1} << d);
  }
}

TEST(Check, FalseBeforeTrueAfter) {
  for (unsigned d = 0; d <= 12; ++d) {
    auto t = build_tree(d);
    EXPECT_FALSE(check(*t));
    compute_hash(*t);
    EXPECT_TRUE(check(*t));
  }
}

TEST(Check, DetectsCorruptedInternalHash) {
  auto t = build_tree(3);
  compute_hash(*t);
  *t->left->right->hash += 1;
  EXPECT_FALSE(check(*t));
}

TEST(Check, DetectsCorruptedLeafAndMissingHash) {
  auto t = build_tree(2);
  compute_hash(*t);
  *t->right->right->hash += 1;
  EXPECT_FALSE(check(*t));

  auto u = build_tree(2);
  compute_hash(*u);
  u->left->hash.reset();
  EXPECT_FALSE(check(*u));
}

TEST(MtreeMain, DepthSixClosedForms) {
  auto r = run({"6"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "stretch tree of depth 7\t check: 128\n"
            "64\t trees of depth 4\t check: 1024\n"
            "16\t trees of depth 6\t check: 1024\n"
            "long lived tree of depth 6\t check: 64\n");
}

TEST(MtreeMain, DepthFourHasASingleScheduleStep) {
  auto r = run({"4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "stretch tree of depth 5\t check: 32\n"
            "16\t trees of depth 4\t check: 256\n"
            "long lived tree of depth 4\t check: 16\n");
}

TEST(MtreeMain, OddDepthSkipsPastN) {
  auto r = run({"7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("of depth 6\t check: 2048"), std::string::npos);
  EXPECT_EQ(r.out.find("trees of depth 8"), std::string::npos);
}

TEST(MtreeMain, DeterministicOutput) { EXPECT_EQ(run({"8"}).out, run({"8"}).out); }

TEST(MtreeMain, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"abc"}).code, 1);
  EXPECT_EQ(run({"3"}).code, 1);
  EXPECT_EQ(run({"31"}).code, 1);
  EXPECT_EQ(run({"6", "7"}).code, 1);
  EXPECT_EQ(run({"-6"}).code, 1);
  EXPECT_NE(run({"x"}).err.find("usage"), std::string::npos);
}
