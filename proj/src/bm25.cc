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

#include "addrmatch/bm25.h"

#include <algorithm>
#include <cmath>

#include "addrmatch/error.h"

namespace addrmatch {
namespace {

double saturation(std::uint32_t tf_doc, std::uint32_t doc_len, double avg_len,
                  const Bm25Params& p) {
  const double tf = tf_doc;
  const double norm = (1.0 - p.b) + p.b * (static_cast<double>(doc_len) / avg_len);
  return ((p.k1 + 1.0) * tf) / (p.k1 * norm + tf);
}

double query_factor(std::uint32_t tf_query, const Bm25Params& p) {
  const double tq = tf_query;
  return ((p.k3 + 1.0) * tq) / (p.k3 + tq);
}

double summand(double weight, std::uint32_t tf_doc, DocId doc,
               std::uint32_t tf_query, const InvertedIndex& index,
               const Bm25Params& p) {
  return weight * saturation(tf_doc, index.doc_len[doc], index.avg_len, p) *
         query_factor(tf_query, p);
}

void check_doc(DocId doc, const InvertedIndex& index) {
  if (doc >= index.n_docs) {
    throw Error(ErrorCode::kUnknownDoc, "doc " + std::to_string(doc) +
                                            " not in index of " +
                                            std::to_string(index.n_docs));
  }
}

void check_judgments(const JudgmentSet& judgments, const InvertedIndex& index) {
  for (DocId d : judgments.relevant) {
    if (d >= index.n_docs) {
      throw Error(ErrorCode::kInvalidJudgment,
                  "judged doc " + std::to_string(d) + " not in index");
    }
  }
}

bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.bm25 != b.bm25) return a.bm25 > b.bm25;
  return a.doc < b.doc;
}

// Term-at-a-time accumulation. Each document receives its summands in query
// term order, the same order score_doc uses, so the totals are identical.
template <typename WeightFn>
std::vector<ScoredCandidate> accumulate_top_k(const QueryVector& query,
                                              const InvertedIndex& index,
                                              const Bm25Params& params,
                                              std::size_t k, WeightFn weight_of) {
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  std::vector<double> acc(index.n_docs, 0.0);
  std::vector<DocId> touched;
  std::vector<bool> seen(index.n_docs, false);
  for (const auto& [term, tf_query] : query.terms) {
    auto list = index.postings_for(term);
    if (list.empty()) continue;
    const double weight = weight_of(term, list.size());
    for (const Posting& p : list) {
      acc[p.doc] += summand(weight, p.tf, p.doc, tf_query, index, params);
      if (!seen[p.doc]) {
        seen[p.doc] = true;
        touched.push_back(p.doc);
      }
    }
  }
  std::vector<ScoredCandidate> out;
  out.reserve(touched.size());
  for (DocId d : touched) {
    if (acc[d] != 0.0) out.push_back({d, acc[d], std::nullopt});
  }
  const std::size_t keep = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep),
                    out.end(), ranks_before);
  out.resize(keep);
  return out;
}

}  // namespace

void Bm25Params::validate() const {
  if (!(k1 >= 0.0) || !(k3 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "BM25 parameters need k1 >= 0, k3 >= 0 and 0 <= b <= 1");
  }
}

QueryVector QueryVector::from_tokens(std::span<const Token> tokens) {
  QueryVector q;
  for (const Token& t : tokens) ++q.terms[t];
  return q;
}

std::size_t JudgmentSet::relevant_with(std::string_view term,
                                       const InvertedIndex& index) const {
  std::size_t n = 0;
  for (const Posting& p : index.postings_for(term)) {
    if (relevant.contains(p.doc)) ++n;
  }
  return n;
}

double idf_basic(std::string_view term, const InvertedIndex& index,
                 bool clamp_negative) {
  const std::size_t df = index.df(term);
  if (df == 0) return 0.0;
  const double w = std::log(static_cast<double>(index.n_docs) / static_cast<double>(df));
  return clamp_negative ? std::max(0.0, w) : w;
}

double rsj_weight(std::size_t n_docs, std::size_t df, std::size_t relevant,
                  std::size_t relevant_with_term) {
  const double N = static_cast<double>(n_docs);
  const double n = static_cast<double>(df);
  const double R = static_cast<double>(relevant);
  const double r = static_cast<double>(relevant_with_term);
  const double odds_relevant = (r + 0.5) / (R - r + 0.5);
  const double odds_other = (n - r + 0.5) / (N - n - R + r + 0.5);
  return std::log(odds_relevant / odds_other);
}

std::vector<TermContribution> explain_doc(const QueryVector& query, DocId doc,
                                          const InvertedIndex& index,
                                          const Bm25Params& params) {
  check_doc(doc, index);
  std::vector<TermContribution> out;
  for (const auto& [term, tf_query] : query.terms) {
    const std::uint32_t tf_doc = index.tf(term, doc);
    if (tf_doc == 0) continue;
    const double w = idf_basic(term, index, params.clamp_negative_idf);
    out.push_back({term, w, tf_doc, tf_query,
                   summand(w, tf_doc, doc, tf_query, index, params)});
  }
  return out;
}

double score_doc(const QueryVector& query, DocId doc, const InvertedIndex& index,
                 const Bm25Params& params) {
  double total = 0.0;
  for (const TermContribution& c : explain_doc(query, doc, index, params)) {
    total += c.summand;
  }
  return total;
}

double score_doc_feedback(const QueryVector& query, DocId doc,
                          const InvertedIndex& index, const Bm25Params& params,
                          const JudgmentSet& judgments) {
  check_doc(doc, index);
  check_judgments(judgments, index);
  double total = 0.0;
  for (const auto& [term, tf_query] : query.terms) {
    const std::uint32_t tf_doc = index.tf(term, doc);
    if (tf_doc == 0) continue;
    const double w = rsj_weight(index.n_docs, index.df(term), judgments.size(),
                                judgments.relevant_with(term, index));
    total += summand(w, tf_doc, doc, tf_query, index, params);
  }
  return total;
}

QueryVector expand_query(const QueryVector& query, const JudgmentSet& judgments,
                         const InvertedIndex& index, const ExpansionConfig& cfg,
                         bool clamp_negative) {
  if (judgments.relevant.empty()) {
    throw Error(ErrorCode::kEmptyJudgments, "query expansion needs judged documents");
  }
  check_judgments(judgments, index);
  struct Candidate {
    std::string_view term;
    double importance;
  };
  std::vector<Candidate> candidates;
  for (const auto& [term, list] : index.postings) {
    if (query.terms.contains(term)) continue;
    std::uint64_t rel_tf = 0;
    for (const Posting& p : list) {
      if (judgments.relevant.contains(p.doc)) rel_tf += p.tf;
    }
    if (rel_tf == 0) continue;
    const double importance =
        static_cast<double>(rel_tf) * idf_basic(term, index, clamp_negative);
    if (importance > 0.0) candidates.push_back({term, importance});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.importance != b.importance) return a.importance > b.importance;
              return a.term < b.term;
            });
  QueryVector out = query;
  for (std::size_t i = 0; i < candidates.size() && i < cfg.m; ++i) {
    out.terms.emplace(std::string(candidates[i].term), 1u);
  }
  return out;
}

std::vector<ScoredCandidate> top_k(const QueryVector& query,
                                   const InvertedIndex& index,
                                   const Bm25Params& params, std::size_t k) {
  return accumulate_top_k(query, index, params, k,
                          [&](std::string_view term, std::size_t) {
                            return idf_basic(term, index, params.clamp_negative_idf);
                          });
}

std::vector<ScoredCandidate> top_k(std::string_view query_text,
                                   const Analyzer& analyzer,
                                   const InvertedIndex& index,
                                   const Bm25Params& params, std::size_t k) {
  const std::vector<Token> tokens = analyzer.tokenize(query_text);
  return top_k(QueryVector::from_tokens(tokens), index, params, k);
}

std::vector<ScoredCandidate> top_k_feedback(const QueryVector& query,
                                            const InvertedIndex& index,
                                            const Bm25Params& params,
                                            const JudgmentSet& judgments,
                                            std::size_t k) {
  check_judgments(judgments, index);
  return accumulate_top_k(query, index, params, k,
                          [&](std::string_view term, std::size_t df) {
                            return rsj_weight(index.n_docs, df, judgments.size(),
                                              judgments.relevant_with(term, index));
                          });
}

}  // namespace addrmatch
