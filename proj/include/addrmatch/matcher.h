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

#ifndef ADDRMATCH_MATCHER_H_
#define ADDRMATCH_MATCHER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrmatch/analyzer.h"
#include "addrmatch/bm25.h"
#include "addrmatch/corpus.h"
#include "addrmatch/index.h"
#include "addrmatch/reranker.h"
#include "json.hpp"

namespace addrmatch {

struct MatchConfig {
  Bm25Params bm25;
  GateConfig gate;
  ComponentWeights weights;
  CategoryBands bands;
  std::size_t k = 10;
  FieldSimilarity similarity = normalized_edit_similarity;

  // Validates every nested invariant; throws kInvalidConfig.
  void validate() const;
};

enum class DecisionPath { kDirectAccept, kReRanked };

std::string_view decision_name(DecisionPath path);

struct MatchResult {
  std::string query_text;
  DocId doc = 0;
  AddressRecord best;
  double bm25_score = 0.0;
  // Present iff decision_path is kReRanked.
  std::optional<double> rerank_score;
  // Weighted component similarity of the query and `best`.
  double similarity = 0.0;
  Category category = Category::kLow;
  DecisionPath decision_path = DecisionPath::kDirectAccept;
  std::size_t pool_size = 1;
  // Retrieval list the decision was made from.
  std::vector<ScoredCandidate> candidates;
};

struct BatchQuery {
  std::string id;
  std::string text;
};

// One batch row: either a result or the error that row produced.
struct BatchRow {
  BatchQuery query;
  std::optional<MatchResult> result;
  std::string error;
};

// Components of a record as stored, never re-parsed from its full address.
ParsedAddress components_of(const AddressRecord& record);

class Matcher {
 public:
  // The index must have been built from `corpus` with `analyzer`; the
  // referenced objects must outlive the matcher. Throws kInvalidConfig on a
  // config, document-count or analyzer-digest mismatch.
  Matcher(const Corpus& corpus, const InvertedIndex& index, const Analyzer& analyzer,
          MatchConfig config = {});

  // Retrieve, gate, re-rank and categorize. Throws kNoCandidates when no
  // indexed term matches.
  MatchResult match(std::string_view query_text) const;

  // Element-wise match in input order. Per-row failures are captured in the
  // row; `threads` == 0 picks the hardware concurrency.
  std::vector<BatchRow> match_batch(std::span<const BatchQuery> queries,
                                    unsigned threads = 1) const;

  // Comparison form of the query and of a corpus record.
  ParsedAddress query_components(std::string_view query_text) const;
  ParsedAddress record_components(DocId doc) const;

  const MatchConfig& config() const { return config_; }
  const Analyzer& analyzer() const { return analyzer_; }
  const InvertedIndex& index() const { return index_; }
  const Corpus& corpus() const { return corpus_; }

 private:
  const Corpus& corpus_;
  const InvertedIndex& index_;
  const Analyzer& analyzer_;
  MatchConfig config_;
};

nlohmann::ordered_json to_json(const MatchResult& result);
nlohmann::ordered_json to_json(const BatchRow& row);

// Batch input: JSONL objects {"id": ..., "query": ...} when the first
// non-blank line starts with '{', otherwise one query per line with the
// 1-based line number as id. Blank lines are skipped.
std::vector<BatchQuery> parse_batch_queries(std::string_view text);

}  // namespace addrmatch

#endif  // ADDRMATCH_MATCHER_H_
