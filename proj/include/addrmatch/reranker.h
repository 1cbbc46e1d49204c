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

#ifndef ADDRMATCH_RERANKER_H_
#define ADDRMATCH_RERANKER_H_

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "addrmatch/analyzer.h"
#include "addrmatch/bm25.h"

namespace addrmatch {

// Per-component weights of the similarity combination.
struct ComponentWeights {
  double name = 0.21;
  double street_name = 0.23;
  double city = 0.19;
  double state = 0.16;
  double zip_code = 0.11;
  double extn_zip = 0.0;
  double country = 0.1;

  double get(Field field) const;
  double& get(Field field);
  double sum() const;

  // Throws kInvalidConfig unless all weights are >= 0 and sum to 1 +- 1e-9.
  void validate() const;
  // Scaled to sum to one. Throws kInvalidConfig if every weight is zero.
  ComponentWeights normalized() const;
  // Weights of fields empty in `present` set to zero, then renormalized.
  // Returns *this unchanged when no weighted field is present.
  ComponentWeights restricted_to(const ParsedAddress& present) const;

  bool operator==(const ComponentWeights&) const = default;
};

struct GateConfig {
  double threshold = 3.0;
  double rerank_pool_margin = 3.0;

  void validate() const;
  bool operator==(const GateConfig&) const = default;
};

struct CategoryBands {
  double very_high = 0.95;
  double high = 0.85;
  double medium = 0.70;

  void validate() const;
  bool operator==(const CategoryBands&) const = default;
};

enum class Category { kLow, kMedium, kHigh, kVeryHigh };

std::string_view category_name(Category category);

struct GateDecision {
  enum class Kind { kDirectAccept, kReRank };
  Kind kind;
  // The accepted candidate alone, or every candidate within the pool margin
  // of rank 1, in input order.
  std::vector<ScoredCandidate> pool;
};

// Candidates must be sorted by descending score. Throws kEmptyCandidates.
GateDecision gate(std::span<const ScoredCandidate> candidates, const GateConfig& cfg);

// Splits the gaps into two clusters with 1-D k-means started at the minimum
// and maximum, and returns the midpoint of the converged centroids.
// Throws kDegenerateGaps when fewer than two distinct values are given.
double estimate_threshold(std::span<const double> gaps);

// estimate_threshold, or `fallback` on degenerate input.
double estimate_threshold_or(std::span<const double> gaps, double fallback = 3.0);

// Similarity of two component strings in [0, 1].
using FieldSimilarity = std::function<double(std::string_view, std::string_view)>;

// 1 - levenshtein(a, b) / max(|a|, |b|); both empty -> 1, one empty -> 0.
double normalized_edit_similarity(std::string_view a, std::string_view b);

std::size_t levenshtein(std::string_view a, std::string_view b);

// Sum over fields of weight * sim(a.field, b.field), clamped to [0, 1].
// Weights must satisfy ComponentWeights::validate().
double component_similarity(const ParsedAddress& a, const ParsedAddress& b,
                            const ComponentWeights& weights,
                            const FieldSimilarity& sim = normalized_edit_similarity);

// Lower bounds are inclusive. Throws kOutOfRange outside [0, 1].
Category categorize(double similarity, const CategoryBands& bands);

}  // namespace addrmatch

#endif  // ADDRMATCH_RERANKER_H_
