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

#ifndef ADDRMATCH_BM25_H_
#define ADDRMATCH_BM25_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrmatch/analyzer.h"
#include "addrmatch/index.h"

namespace addrmatch {

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
  double k3 = 1.5;
  // Negative log(N/df) weights are raised to zero.
  bool clamp_negative_idf = true;

  // Throws kInvalidConfig unless k1, k3 >= 0 and 0 <= b <= 1.
  void validate() const;

  bool operator==(const Bm25Params&) const = default;
};

// Query term -> frequency in the query (always >= 1).
struct QueryVector {
  std::map<std::string, std::uint32_t, std::less<>> terms;

  static QueryVector from_tokens(std::span<const Token> tokens);

  bool operator==(const QueryVector&) const = default;
};

// Documents judged relevant to the query.
struct JudgmentSet {
  std::set<DocId> relevant;

  std::size_t size() const { return relevant.size(); }
  // Number of judged-relevant documents containing `term`.
  std::size_t relevant_with(std::string_view term, const InvertedIndex& index) const;
};

struct ExpansionConfig {
  std::size_t m = 15;
};

struct ScoredCandidate {
  DocId doc = 0;
  double bm25 = 0.0;
  std::optional<double> rerank;

  bool operator==(const ScoredCandidate&) const = default;
};

// One term's share of a document score.
struct TermContribution {
  std::string term;
  double weight = 0.0;
  std::uint32_t tf_doc = 0;
  std::uint32_t tf_query = 0;
  double summand = 0.0;
};

// log(N / df); 0 for unseen terms; clamped at 0 when requested.
double idf_basic(std::string_view term, const InvertedIndex& index,
                 bool clamp_negative = true);

// Smoothed relevance weight
//   log[((r + .5) / (R - r + .5)) / ((df - r + .5) / (N - df - R + r + .5))]
// with R = |judgments| and r = judged-relevant docs containing the term.
double rsj_weight(std::size_t n_docs, std::size_t df, std::size_t relevant,
                  std::size_t relevant_with_term);

// Per-term breakdown of score_doc, in term order, omitting terms absent from
// the document. Summing `summand` in order reproduces score_doc exactly.
std::vector<TermContribution> explain_doc(const QueryVector& query, DocId doc,
                                          const InvertedIndex& index,
                                          const Bm25Params& params);

// Throws kUnknownDoc.
double score_doc(const QueryVector& query, DocId doc, const InvertedIndex& index,
                 const Bm25Params& params);

// score_doc with the relevance weight substituted for log(N/df); never
// clamped. Throws kUnknownDoc or kInvalidJudgment.
double score_doc_feedback(const QueryVector& query, DocId doc,
                          const InvertedIndex& index, const Bm25Params& params,
                          const JudgmentSet& judgments);

// Adds up to cfg.m new terms from the judged documents ranked by
// (tf summed over judged docs) * idf_basic, ties broken lexicographically.
// Terms with zero importance are never added. Throws kEmptyJudgments.
QueryVector expand_query(const QueryVector& query, const JudgmentSet& judgments,
                         const InvertedIndex& index, const ExpansionConfig& cfg,
                         bool clamp_negative = true);

// Highest-scoring documents, score descending then doc ascending. Documents
// scoring exactly zero are dropped. k must be >= 1.
std::vector<ScoredCandidate> top_k(const QueryVector& query,
                                   const InvertedIndex& index,
                                   const Bm25Params& params, std::size_t k);
std::vector<ScoredCandidate> top_k(std::string_view query_text,
                                   const Analyzer& analyzer,
                                   const InvertedIndex& index,
                                   const Bm25Params& params, std::size_t k);

// Same ranking contract as top_k, scored with score_doc_feedback.
std::vector<ScoredCandidate> top_k_feedback(const QueryVector& query,
                                            const InvertedIndex& index,
                                            const Bm25Params& params,
                                            const JudgmentSet& judgments,
                                            std::size_t k);

}  // namespace addrmatch

#endif  // ADDRMATCH_BM25_H_
