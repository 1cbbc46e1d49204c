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

#include "addrmatch/matcher.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "addrmatch/error.h"

namespace addrmatch {
namespace {

const std::filesystem::path kFixtures = ADDRMATCH_FIXTURES;

class MatcherTest : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = ingest(kFixtures / "sample_corpus.jsonl");
    index_ = build_index(corpus_, analyzer_);
  }
  Matcher matcher(MatchConfig cfg = {}) const { return Matcher(corpus_, index_, analyzer_, cfg); }

  Analyzer analyzer_;
  Corpus corpus_;
  InvertedIndex index_;
};

TEST_F(MatcherTest, ChainworksDirectAccept) {
  const MatchResult r = matcher().match("Chainworks, Inc. 3255 Hart Rd Jackson, MI 49201");
  EXPECT_EQ(r.best.full_address, "CHAINWORKS, 3255 HART ROAD, JACKSON, MI, 49201, USA");
  EXPECT_EQ(r.category, Category::kVeryHigh);
  EXPECT_EQ(r.decision_path, DecisionPath::kDirectAccept);
  EXPECT_FALSE(r.rerank_score.has_value());
  EXPECT_EQ(r.doc, r.candidates.front().doc);
}

TEST_F(MatcherTest, TableTwoQueryIsReRanked) {
  const MatchResult r = matcher().match(
      "MIDWEST MANUFACTURING/MW PREHUNG PLANT – BLDG #320,14320 COUNTY ROAD 15, HOLIDAY "
      "CITY, OH 43554,TEL: 419-485-6584,ATTN: JUSTIN CRAWFORD eMAIL: "
      "jcrawfor@midwestmanufacturing.com");
  EXPECT_EQ(r.decision_path, DecisionPath::kReRanked);
  EXPECT_EQ(r.best.name, "MIDWEST MANUFACTURING (MENARD INC.)");
  EXPECT_EQ(r.category, Category::kMedium);
  ASSERT_TRUE(r.rerank_score.has_value());
  EXPECT_EQ(*r.rerank_score, r.similarity);
  EXPECT_GT(r.pool_size, 1u);
  // The winner is in the pool and every pooled candidate carries its score.
  const auto pooled = std::count_if(r.candidates.begin(), r.candidates.end(),
                                    [](const ScoredCandidate& c) { return c.rerank; });
  EXPECT_EQ(static_cast<std::size_t>(pooled), r.pool_size);
  const auto win = std::find_if(r.candidates.begin(), r.candidates.end(),
                                [&](const ScoredCandidate& c) { return c.doc == r.doc; });
  ASSERT_NE(win, r.candidates.end());
  EXPECT_TRUE(win->rerank.has_value());
}

TEST_F(MatcherTest, NoCandidates) {
  try {
    matcher().match("zzzz qqqq");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoCandidates);
  }
}

TEST_F(MatcherTest, BatchKeepsOrderAndIsolatesFailures) {
  const std::vector<BatchQuery> qs = {
      {"a", "Chainworks, Inc. 3255 Hart Rd Jackson, MI 49201"},
      {"b", "???"},
      {"c", "HOG SLAT INC 1112 20TH STREET NORTH HUMBOLDT, IA 50548, US"}};
  const auto rows = matcher().match_batch(qs, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].result.has_value());
  EXPECT_FALSE(rows[1].result.has_value());
  EXPECT_FALSE(rows[1].error.empty());
  ASSERT_TRUE(rows[2].result.has_value());
  EXPECT_EQ(rows[2].result->best.name, "HOG SLAT INC");
  EXPECT_TRUE(matcher().match_batch({}, 2).empty());
}

TEST_F(MatcherTest, BatchIsDeterministicAcrossThreadCounts) {
  const auto qs = parse_batch_queries(
      "Chainworks, Inc. 3255 Hart Rd Jackson, MI 49201\n\nEXEL 41873 Ecorse Road BELLEVILLE MI\n"
      "MENARD INC 4949 264TH ST VALLEY NE 68064\n");
  ASSERT_EQ(qs.size(), 3u);
  EXPECT_EQ(qs[1].id, "3");
  std::string one, many;
  for (const BatchRow& r : matcher().match_batch(qs, 1)) one += to_json(r).dump() + "\n";
  for (const BatchRow& r : matcher().match_batch(qs, 8)) many += to_json(r).dump() + "\n";
  EXPECT_EQ(one, many);
}

TEST_F(MatcherTest, DirectAcceptIsRankOne) {
  for (const auto& q : parse_batch_queries(
           "EXEL 41873 Ecorse Road BELLEVILLE MI\nVISTA OUTDOOR ANOKA\n"
           "PROVIA 1550 COUNTY ROAD 140\nMENARDS VALLEY DC 4801 N 264TH ST\n")) {
    const MatchResult r = matcher().match(q.text);
    const auto top = top_k(q.text, analyzer_, index_, Bm25Params{}, 10);
    if (r.decision_path == DecisionPath::kDirectAccept) {
      EXPECT_EQ(r.doc, top.front().doc);
    }
  }
}

TEST_F(MatcherTest, RecordComponentsComeFromFields) {
  const ParsedAddress rec = matcher().record_components(0);
  EXPECT_EQ(rec.city, "plano");
  EXPECT_EQ(rec.state, "il");
  EXPECT_EQ(rec.zip_code, "60545");
}

TEST_F(MatcherTest, RejectsMismatchedIndex) {
  const InvertedIndex other = build_index({{"a"}}, "");
  EXPECT_THROW(Matcher(corpus_, other, analyzer_), Error);
  MatchConfig bad;
  bad.k = 0;
  EXPECT_THROW(matcher(bad), Error);
}

TEST(BatchQueries, Jsonl) {
  const auto qs = parse_batch_queries("{\"id\": 7, \"query\": \"x\"}\n{\"id\":\"b\",\"query\":\"y\"}\n");
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0].id, "7");
  EXPECT_EQ(qs[1].text, "y");
  EXPECT_TRUE(parse_batch_queries("").empty());
  EXPECT_THROW(parse_batch_queries("{\"id\":1}\n"), Error);
}

}  // namespace
}  // namespace addrmatch
