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

#ifndef ADDRMATCH_EVAL_H_
#define ADDRMATCH_EVAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrmatch/matcher.h"

namespace addrmatch {

struct LabeledPair {
  std::string query;
  // Absent when the corpus holds no correct answer.
  std::optional<std::string> gold_record_id;

  bool is_matchable() const { return gold_record_id.has_value(); }
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Zero denominators give 0.
Metrics metrics_from(const Confusion& c);

enum class Outcome { kTruePositive, kFalsePositive, kFalseNegative, kTrueNegative };

// `prediction` is empty when matching produced no candidate. A Low-category
// prediction counts as a rejection, not as a returned match.
Outcome classify(const LabeledPair& pair, const std::optional<MatchResult>& prediction);

struct EvalReport {
  Confusion confusion;
  Metrics metrics;
  std::vector<Outcome> outcomes;
};

// Throws kEmptyPairs.
EvalReport evaluate(std::span<const LabeledPair> pairs, const Matcher& matcher);

struct GridPoint {
  Bm25Params params;
  EvalReport report;
};

struct GridResult {
  Bm25Params best;
  Metrics best_metrics;
  // One row per (k1, b, k3), sorted by k1, then b, then k3.
  std::vector<GridPoint> table;
};

// Exhaustive search over the Cartesian grid. The best point maximizes F1;
// ties go to the smaller k1, then b, then k3. Throws kEmptyGrid or
// kEmptyPairs.
GridResult grid_search(std::span<const LabeledPair> pairs, const Corpus& corpus,
                       const InvertedIndex& index, const Analyzer& analyzer,
                       const MatchConfig& base, std::span<const double> k1_values,
                       std::span<const double> b_values,
                       std::span<const double> k3_values, unsigned threads = 1);

// JSONL of {"query": ..., "gold": "<record id>" | null}.
std::vector<LabeledPair> parse_labeled_pairs(std::string_view text);

nlohmann::ordered_json to_json(const EvalReport& report);
std::string format_report(const EvalReport& report);
std::string format_grid(const GridResult& grid);

}  // namespace addrmatch

#endif  // ADDRMATCH_EVAL_H_
