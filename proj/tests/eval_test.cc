// Copyright 2026 The addrmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "addrmatch/eval.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "addrmatch/error.h"

namespace addrmatch {
namespace {

const std::filesystem::path kFixtures = ADDRMATCH_FIXTURES;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

MatchResult predicted(std::string id, Category cat) {
  MatchResult r;
  r.best.record_id = std::move(id);
  r.category = cat;
  return r;
}

TEST(Metrics, HandCounts) {
  const Metrics all = metrics_from({5, 0, 0, 3});
  EXPECT_EQ(all.precision, 1.0);
  EXPECT_EQ(all.recall, 1.0);
  EXPECT_EQ(all.f1, 1.0);
  const Metrics m = metrics_from({2, 1, 1, 0});
  EXPECT_NEAR(m.precision, 2.0 / 3, 1e-15);
  EXPECT_NEAR(m.recall, 2.0 / 3, 1e-15);
  EXPECT_NEAR(m.f1, 2.0 / 3, 1e-15);
  const Metrics none = metrics_from({0, 3, 0, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  const Metrics empty = metrics_from({});
  EXPECT_EQ(empty.recall, 0.0);
}

TEST(Classify, Outcomes) {
  const LabeledPair gold{"q", std::string("A")};
  const LabeledPair none{"q", std::nullopt};
  EXPECT_EQ(classify(gold, predicted("A", Category::kHigh)), Outcome::kTruePositive);
  EXPECT_EQ(classify(gold, predicted("B", Category::kHigh)), Outcome::kFalsePositive);
  EXPECT_EQ(classify(gold, predicted("A", Category::kLow)), Outcome::kFalseNegative);
  EXPECT_EQ(classify(gold, std::nullopt), Outcome::kFalseNegative);
  EXPECT_EQ(classify(none, predicted("A", Category::kMedium)), Outcome::kFalsePositive);
  EXPECT_EQ(classify(none, predicted("A", Category::kLow)), Outcome::kTrueNegative);
  EXPECT_EQ(classify(none, std::nullopt), Outcome::kTrueNegative);
}

class EvalTest : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = ingest(kFixtures / "sample_corpus.jsonl");
    index_ = build_index(corpus_, analyzer_);
    pairs_ = parse_labeled_pairs(read_file(kFixtures / "sample_pairs.jsonl"));
  }
  Analyzer analyzer_;
  Corpus corpus_;
  InvertedIndex index_;
  std::vector<LabeledPair> pairs_;
};

TEST_F(EvalTest, FixturePairs) {
  ASSERT_EQ(pairs_.size(), 11u);
  const EvalReport r = evaluate(pairs_, Matcher(corpus_, index_, analyzer_));
  EXPECT_EQ(r.confusion, (Confusion{10, 0, 0, 1}));
  EXPECT_EQ(r.metrics.f1, 1.0);
  EXPECT_EQ(r.outcomes.size(), 11u);
  EXPECT_NE(format_report(r).find("F1"), std::string::npos);
  EXPECT_EQ(to_json(r)["tp"], 10);
}

TEST_F(EvalTest, EmptyPairs) {
  try {
    evaluate({}, Matcher(corpus_, index_, analyzer_));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPairs);
  }
}

TEST_F(EvalTest, GridFourPoints) {
  const std::vector<double> k1 = {2.0, 1.2}, b = {0.0, 0.75}, k3 = {1.5};
  const GridResult g = grid_search(pairs_, corpus_, index_, analyzer_, MatchConfig{}, k1, b, k3, 4);
  ASSERT_EQ(g.table.size(), 4u);
  EXPECT_EQ(g.table[0].params.k1, 1.2);
  EXPECT_EQ(g.table[0].params.b, 0.0);
  EXPECT_EQ(g.table[3].params.k1, 2.0);
  EXPECT_EQ(g.table[3].params.b, 0.75);
  const GridResult again =
      grid_search(pairs_, corpus_, index_, analyzer_, MatchConfig{}, k1, b, k3, 1);
  EXPECT_EQ(format_grid(g), format_grid(again));
  EXPECT_EQ(g.best, again.best);
}

TEST_F(EvalTest, GridTieGoesToLowerK1) {
  // Every point scores F1 = 1 on the fixture, so the first row wins.
  const std::vector<double> k1 = {1.5, 1.2}, b = {0.75}, k3 = {1.5};
  const GridResult g = grid_search(pairs_, corpus_, index_, analyzer_, MatchConfig{}, k1, b, k3);
  EXPECT_EQ(g.table[0].report.metrics.f1, g.table[1].report.metrics.f1);
  EXPECT_EQ(g.best.k1, 1.2);
}

TEST_F(EvalTest, SingletonAndEmptyGrid) {
  const std::vector<double> one = {1.0}, half = {0.5}, none;
  const GridResult g = grid_search(pairs_, corpus_, index_, analyzer_, MatchConfig{}, one, half, one);
  EXPECT_EQ(g.best.k1, 1.0);
  EXPECT_EQ(g.best.b, 0.5);
  EXPECT_EQ(g.best.k3, 1.0);
  try {
    grid_search(pairs_, corpus_, index_, analyzer_, MatchConfig{}, none, half, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGrid);
  }
}

TEST(LabeledPairs, Parse) {
  const auto p = parse_labeled_pairs("{\"query\":\"a\",\"gold\":\"X\"}\n\n{\"query\":\"b\",\"gold\":null}\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_TRUE(p[0].is_matchable());
  EXPECT_FALSE(p[1].is_matchable());
  EXPECT_THROW(parse_labeled_pairs("{\"query\":\"a\"}\n"), Error);
}

}  // namespace
}  // namespace addrmatch
