// Copyright 2026 The rtbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "rtbench/report.hpp"
#include "rtbench/suite.hpp"

using namespace rtbench;

namespace {

SampleSet set(std::string name, std::vector<double> xs) {
  SampleSet s{std::move(name), std::move(xs), {}};
  s.exit_codes.assign(s.samples.size(), 0);
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Markdown, SingleConstantVariant) {
  auto md = to_markdown(make_report("", {set("one", {1.0, 1.0, 1.0})}));
  EXPECT_EQ(md,
            "| Command | Mean [s] | Min [s] | Max [s] | Relative |\n"
            "|:---|---:|---:|---:|---:|\n"
            "| one | 1.000 ± 0.000 | 1.000 | 1.000 | 1.00 |\n");
}

TEST(Markdown, ZeroVarianceRatioAndBaselineFirst) {
  auto md = to_markdown(make_report("T", {set("slow", {6.0, 6.0}), set("fast", {2.0, 2.0})}));
  auto l = lines(md);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "Table: T");
  EXPECT_EQ(l[4], "| fast | 2.000 ± 0.000 | 2.000 | 2.000 | 1.00 |");
  EXPECT_EQ(l[5], "| slow | 6.000 ± 0.000 | 6.000 | 6.000 | 3.00 ± 0.00 |");
}

TEST(Markdown, EscapesPipesInNames) {
  auto md = to_markdown(make_report("", {set("a|b", {1.0})}));
  EXPECT_NE(md.find("| a\\|b |"), std::string::npos);
}

TEST(Markdown, GoldenReplayOfStartupMatrix) {
  auto report = report_from_json(slurp(RTBENCH_TEST_DATA "/startup_export.json"));
  EXPECT_EQ(to_markdown(report), slurp(RTBENCH_TEST_DATA "/startup_expected.md"));
  ASSERT_EQ(report.rows.size(), 10u);
  EXPECT_EQ(report.rows.front().variant_name, "Native x86-musl");
}

TEST(Csv, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(to_csv(make_report("", {})), "command,mean,stddev,min,max,relative,relative_sigma\n");
}

TEST(Csv, QuotesAwkwardNamesAndLeavesBaselineSigmaEmpty) {
  auto csv = to_csv(make_report("", {set("a,b", {1.0}), set("c", {2.0})}));
  auto l = lines(csv);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[1], "\"a,b\",1,0,1,1,1,");
  EXPECT_EQ(l[2], "c,2,0,2,2,2,0");
}

TEST(Json, RoundTripRecoversMeansBitExactly) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.001, 3.0);
  std::vector<SampleSet> sets;
  for (int v = 0; v < 5; ++v) {
    std::vector<double> xs(17);
    for (auto& x : xs) x = d(rng);
    sets.push_back(set("variant " + std::to_string(v), xs));
  }
  auto original = make_report("round trip", sets);
  auto doc = nlohmann::json::parse(to_json(original));
  auto replayed = report_from_json(to_json(original));
  ASSERT_EQ(replayed.rows.size(), original.rows.size());
  for (std::size_t i = 0; i < original.rows.size(); ++i) {
    EXPECT_EQ(doc["results"][i]["mean"].get<double>(), original.rows[i].stats.mean);
    EXPECT_EQ(replayed.rows[i].stats.mean, original.rows[i].stats.mean);
    EXPECT_EQ(replayed.rows[i].variant_name, original.rows[i].variant_name);
  }
  EXPECT_EQ(to_markdown(replayed), to_markdown(original));
  EXPECT_EQ(replayed.title, "round trip");
}

TEST(Csv, MeanColumnMatchesEmbeddedSamples) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.005, 1.5);
  std::vector<SampleSet> sets;
  for (int v = 0; v < 4; ++v) {
    std::vector<double> xs(50);
    for (auto& x : xs) x = d(rng);
    sets.push_back(set("v" + std::to_string(v), xs));
  }
  auto report = make_report("", sets);
  auto doc = nlohmann::json::parse(to_json(report));
  auto csv = lines(to_csv(report));
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto times = doc["results"][i]["times"].get<std::vector<double>>();
    const double recomputed = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    std::istringstream fields(csv[i + 1]);
    std::string name, mean;
    std::getline(fields, name, ',');
    std::getline(fields, mean, ',');
    EXPECT_EQ(name, doc["results"][i]["command"].get<std::string>());
    EXPECT_NEAR(std::stod(mean), recomputed, 1e-12);
  }
}

TEST(Json, RejectsMalformedExports) {
  EXPECT_THROW(report_from_json("not json"), ValidationError);
  EXPECT_THROW(report_from_json("{}"), ValidationError);
  EXPECT_THROW(report_from_json(R"({"results":[{"command":"a","times":[]}]})"), ValidationError);
  EXPECT_THROW(report_from_json(R"({"results":[{"command":"a","times":[-1]}]})"), ValidationError);
  EXPECT_THROW(report_from_json(R"({"results":[{"command":"a","times":[1],"exit_codes":[0,0]}]})"), ValidationError);
}

struct BoxCase {
  std::vector<double> samples;
  double q1, median, q3, lo, hi;
  std::vector<double> outliers;
};

// Expected values computed by hand (linear interpolation at (n-1)p, 1.5 IQR
// fences) and cross-checked with matplotlib.cbook.boxplot_stats.
TEST(Boxplot, FixedFixtures) {
  const std::vector<BoxCase> cases = {
      {{5, 5, 5, 5}, 5, 5, 5, 5, 5, {}},
      {{1, 2, 3, 4}, 1.75, 2.5, 3.25, 1, 4, {}},
      {{1, 2, 3, 4, 100}, 2, 3, 4, 1, 4, {100}},
      {{0, 1, 1, 1}, 0.75, 1, 1, 0.75, 1, {0}},
      {{-20, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 2.5, 5, 7.5, 1, 10, {-20}},
      {{0.3, 0.1, 0.2}, 0.15, 0.2, 0.25, 0.1, 0.3, {}},
  };
  for (const auto& c : cases) {
    auto box = boxplot_data(set("x", c.samples));
    EXPECT_DOUBLE_EQ(box.q1, c.q1);
    EXPECT_DOUBLE_EQ(box.median, c.median);
    EXPECT_DOUBLE_EQ(box.q3, c.q3);
    EXPECT_DOUBLE_EQ(box.whisker_low, c.lo);
    EXPECT_DOUBLE_EQ(box.whisker_high, c.hi);
    EXPECT_EQ(box.outliers, c.outliers);
  }
}

TEST(Boxplot, EmptyIsAnError) { EXPECT_THROW(boxplot_data(set("x", {})), ValidationError); }

TEST(BoxplotProperty, PartitionAndOrdering) {
  std::mt19937_64 rng(42);
  std::lognormal_distribution<double> heavy(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 60);
  std::uniform_int_distribution<int> coarse(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> xs(size(rng));
    for (auto& x : xs) x = trial % 3 == 0 ? double(coarse(rng)) : heavy(rng);
    auto box = boxplot_data(set("x", xs));
    ASSERT_LE(box.q1, box.median);
    ASSERT_LE(box.median, box.q3);
    ASSERT_LE(box.whisker_low, box.q1);
    ASSERT_GE(box.whisker_high, box.q3);
    std::size_t inside = 0;
    for (double x : xs)
      if (x >= box.whisker_low && x <= box.whisker_high) ++inside;
    for (double o : box.outliers) ASSERT_TRUE(o < box.whisker_low || o > box.whisker_high);
    ASSERT_EQ(inside + box.outliers.size(), xs.size());
  }
}

TEST(BoxplotProperty, AffineScaling) {
  std::mt19937_64 rng(8);
  std::lognormal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(3 + trial % 30);
    for (auto& x : xs) x = d(rng);
    const double k = 2.5, c = 0.75;
    auto ys = xs;
    for (auto& y : ys) y = k * y + c;
    auto a = boxplot_data(set("x", xs));
    auto b = boxplot_data(set("x", ys));
    EXPECT_NEAR(b.q1, k * a.q1 + c, 1e-9);
    EXPECT_NEAR(b.median, k * a.median + c, 1e-9);
    EXPECT_NEAR(b.q3, k * a.q3 + c, 1e-9);
    EXPECT_NEAR(b.whisker_low, k * a.whisker_low + c, 1e-9);
    EXPECT_NEAR(b.whisker_high, k * a.whisker_high + c, 1e-9);
    EXPECT_EQ(a.outliers.size(), b.outliers.size());
  }
}

TEST(Boxplot, JsonExportFollowsRowOrder) {
  auto doc = nlohmann::json::parse(boxplot_json(make_report("", {set("slow", {3, 3}), set("fast", {1, 2})})));
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc[0]["command"], "fast");
  EXPECT_EQ(doc[0]["median"], 1.5);
}
