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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. argv[1], when given, is the addrmatch executable used
// for the end-to-end determinism check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "addrmatch/analyzer.h"
#include "addrmatch/bm25.h"
#include "addrmatch/corpus.h"
#include "addrmatch/error.h"
#include "addrmatch/eval.h"
#include "addrmatch/index.h"
#include "addrmatch/matcher.h"
#include "addrmatch/reranker.h"
#include "oracle.h"

namespace fs = std::filesystem;
using namespace addrmatch;

namespace {

const fs::path kFixtures = ADDRMATCH_FIXTURES;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Check {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct FixtureQuery {
  std::string text;
  std::string gold;
  std::string label;
};

// Fixture queries, the record each should resolve to, and the expected label.
std::vector<FixtureQuery> fixture_queries() {
  std::vector<FixtureQuery> out;
  const char* labels[] = {"Medium", "VeryHigh", "High", "Medium",   "VeryHigh",
                          "High",   "VeryHigh", "High", "VeryHigh", "High"};
  std::size_t i = 0;
  for (const LabeledPair& p : parse_labeled_pairs(read_file(kFixtures / "sample_pairs.jsonl"))) {
    if (!p.gold_record_id || i == 10) continue;
    out.push_back({p.query, *p.gold_record_id, labels[i++]});
  }
  return out;
}

InvertedIndex index_of(const std::vector<oracle::Doc>& docs) {
  return build_index(docs, "random");
}

QueryVector query_of(const oracle::Doc& q) { return QueryVector::from_tokens(q); }

std::string ranking_mismatch(const std::vector<ScoredCandidate>& got,
                             const std::vector<std::pair<std::size_t, double>>& want,
                             double tol) {
  if (got.size() != want.size()) {
    return "length " + std::to_string(got.size()) + " vs " + std::to_string(want.size());
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (std::abs(got[i].bm25 - want[i].second) > tol) {
      return "score at rank " + std::to_string(i + 1);
    }
    // Documents may swap only inside a tie.
    if (got[i].doc != want[i].first) {
      bool tied = false;
      for (const auto& [d, s] : want) {
        tied |= d == got[i].doc && std::abs(s - want[i].second) <= tol;
      }
      if (!tied) return "doc at rank " + std::to_string(i + 1);
    }
  }
  return {};
}

Check criterion1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> k1d(0.0, 3.0), bd(0.0, 1.0), k3d(0.0, 3.0);
  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    const auto docs = oracle::random_corpus(rng, 50, 8, 12);
    const InvertedIndex idx = index_of(docs);
    for (int qi = 0; qi < 5; ++qi) {
      const oracle::Doc q = oracle::random_query(rng, 4, 14);
      Bm25Params p{k1d(rng), bd(rng), k3d(rng), true};
      const std::size_t k = 1 + rng() % docs.size();
      const auto got = top_k(query_of(q), idx, p, k);
      const auto want = oracle::rank(docs.size(), k, [&](std::size_t d) {
        return oracle::bm25(docs, q, d, p.k1, p.b, p.k3);
      });
      const std::string bad = ranking_mismatch(got, want, 1e-9);
      c.expect(bad.empty(), "trial " + std::to_string(trial) + ": " + bad);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  return c;
}

Check criterion2() {
  Check c;
  // k1 = 0: every matching doc scores idf * query factor, whatever tf and length.
  {
    const std::vector<oracle::Doc> docs = {
        {"a"}, {"a", "a", "a", "x", "y"}, {"b"}, {"c", "d"}};
    const InvertedIndex idx = index_of(docs);
    const Bm25Params p{0.0, 0.75, 1.5, true};
    const double expect = std::log(4.0 / 2.0) * 1.0;
    for (DocId d : {0u, 1u}) {
      c.expect(std::abs(score_doc(query_of({"a"}), d, idx, p) - expect) <= 1e-12,
               "k1=0 tf factor");
    }
  }
  // b = 0: equal tf, different lengths, equal scores.
  {
    const std::vector<oracle::Doc> docs = {
        {"a", "x"}, {"a", "y", "z", "u", "v", "w"}, {"b"}};
    const InvertedIndex idx = index_of(docs);
    const Bm25Params p{1.2, 0.0, 1.5, true};
    const double s0 = score_doc(query_of({"a"}), 0, idx, p);
    const double s1 = score_doc(query_of({"a"}), 1, idx, p);
    c.expect(std::abs(s0 - s1) <= 1e-12 && s0 > 0, "b=0 length independence");
    // b = 1: the longer doc scores strictly lower.
    const Bm25Params p1{1.2, 1.0, 1.5, true};
    c.expect(score_doc(query_of({"a"}), 1, idx, p1) < score_doc(query_of({"a"}), 0, idx, p1),
             "b=1 longer doc not penalized");
  }
  // Clamp: no summand below zero on random corpora.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto docs = oracle::random_corpus(rng, 20, 8, 6);
    const InvertedIndex idx = index_of(docs);
    const QueryVector q = query_of(oracle::random_query(rng, 5, 8));
    for (DocId d = 0; d < docs.size(); ++d) {
      for (const TermContribution& t : explain_doc(q, d, idx, Bm25Params{})) {
        c.expect(t.summand >= 0.0, "negative summand under clamp");
      }
    }
  }
  return c;
}

Check criterion3() {
  Check c;
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    const auto docs = oracle::random_corpus(rng, 30, 8, 10);
    const InvertedIndex idx = index_of(docs);
    const oracle::Doc q = oracle::random_query(rng, 4, 12);
    const Bm25Params p;
    const auto got = top_k_feedback(query_of(q), idx, p, JudgmentSet{}, docs.size());
    const auto want = oracle::rank(docs.size(), docs.size(), [&](std::size_t d) {
      return oracle::bm25_feedback(docs, q, d, p.k1, p.b, p.k3, {});
    });
    const std::string bad = ranking_mismatch(got, want, 1e-9);
    c.expect(bad.empty(), "trial " + std::to_string(trial) + ": " + bad);
  }
  return c;
}

Check criterion4() {
  Check c;
  const Corpus corpus = ingest(kFixtures / "ranking_corpus.jsonl");
  const Analyzer analyzer;
  const InvertedIndex idx = build_index(corpus, analyzer);
  const Matcher matcher(corpus, idx, analyzer);
  const auto queries = fixture_queries();
  const Bm25Params p;

  const auto t3 = top_k(queries[1].text, analyzer, idx, p, 10);
  c.expect(!t3.empty() && corpus.records[t3[0].doc].name == "Alliance Outdoor Group Inc",
           "Alliance query rank 1 is not the Alliance record");

  const auto t4 = top_k(queries[7].text, analyzer, idx, p, 10);
  c.expect(!t4.empty() && corpus.records[t4[0].doc].name == "AEL SPAN LLC",
           "AEL SPAN query rank 1 is not AEL SPAN LLC");

  const auto t2 = top_k(queries[0].text, analyzer, idx, p, 10);
  c.expect(t2.size() >= 2 && t2[0].bm25 - t2[1].bm25 < 3.0, "Midwest query gap not below 3");
  const MatchResult r = matcher.match(queries[0].text);
  c.expect(r.decision_path == DecisionPath::kReRanked, "Midwest query not re-ranked");
  c.expect(r.best.name == "MIDWEST MANUFACTURING (MENARD INC.)",
           "Midwest query winner is " + r.best.name);
  return c;
}

Check criterion5(std::string& summary) {
  Check c;
  const Corpus corpus = ingest(kFixtures / "sample_corpus.jsonl");
  const Analyzer analyzer;
  const InvertedIndex idx = build_index(corpus, analyzer);
  const Matcher matcher(corpus, idx, analyzer);
  int agree = 0;
  int q = 0;
  for (const FixtureQuery& fq : fixture_queries()) {
    ++q;
    const MatchResult r = matcher.match(fq.text);
    c.expect(r.best.record_id == fq.gold, "query " + std::to_string(q) + " returned " +
                                              r.best.record_id + ", expected " + fq.gold);
    if (category_name(r.category) == fq.label) {
      ++agree;
    } else {
      summary += " Q" + std::to_string(q) + "=" + std::string(category_name(r.category)) +
                 "/" + fq.label;
    }
  }
  c.expect(q == 10, "expected 10 fixture queries");
  c.expect(agree >= 8, std::to_string(agree) + "/10 categories agree");
  summary = std::to_string(agree) + "/10 categories agree;" +
            (summary.empty() ? " none differ" : " differ:" + summary);
  return c;
}

Check criterion6() {
  Check c;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  {
    const Metrics m = metrics_from({2, 1, 1, 0});
    c.expect(near(m.precision, 2.0 / 3) && near(m.recall, 2.0 / 3) && near(m.f1, 2.0 / 3),
             "metrics_from(2,1,1)");
  }
  // Hand-counted fixture: ten correct pairs, one wrong label, one unmatchable
  // query that still finds a record, one unmatchable query with no
  // candidates, one matchable query with no candidates.
  {
    const Corpus corpus = ingest(kFixtures / "sample_corpus.jsonl");
    const Analyzer analyzer;
    const InvertedIndex idx = build_index(corpus, analyzer);
    const Matcher matcher(corpus, idx, analyzer);
    std::vector<LabeledPair> pairs;
    for (const FixtureQuery& q : fixture_queries()) pairs.push_back({q.text, q.gold});
    pairs.push_back({pairs[4].query, std::string("A001")});
    pairs.push_back({pairs[8].query, std::nullopt});
    pairs.push_back({"77 Nowhere Lane, Springfield, ZZ 00000", std::nullopt});
    pairs.push_back({"77 Nowhere Lane, Springfield, ZZ 00000", std::string("A002")});
    const EvalReport r = evaluate(pairs, matcher);
    c.expect(r.confusion == Confusion{10, 2, 1, 1}, "confusion counts");
    c.expect(near(r.metrics.precision, 10.0 / 12) && near(r.metrics.recall, 10.0 / 11) &&
                 near(r.metrics.f1, 20.0 / 23),
             "fixture metrics");
  }
  // Randomized prediction sets.
  std::mt19937_64 rng(99);
  const Category cats[] = {Category::kLow, Category::kMedium, Category::kHigh,
                           Category::kVeryHigh};
  for (int trial = 0; trial < 1000; ++trial) {
    Confusion conf;
    const std::size_t n = 1 + rng() % 20;
    for (std::size_t i = 0; i < n; ++i) {
      LabeledPair pair{"q", std::nullopt};
      if (rng() % 4 != 0) pair.gold_record_id = "R" + std::to_string(rng() % 3);
      std::optional<MatchResult> pred;
      if (rng() % 5 != 0) {
        pred.emplace();
        pred->best.record_id = "R" + std::to_string(rng() % 3);
        pred->category = cats[rng() % 4];
      }
      switch (classify(pair, pred)) {
        case Outcome::kTruePositive: ++conf.tp; break;
        case Outcome::kFalsePositive: ++conf.fp; break;
        case Outcome::kFalseNegative: ++conf.fn; break;
        case Outcome::kTrueNegative: ++conf.tn; break;
      }
    }
    const Metrics m = metrics_from(conf);
    for (double v : {m.precision, m.recall, m.f1}) c.expect(v >= 0 && v <= 1, "metric range");
    c.expect((m.f1 > 0) == (conf.tp > 0), "f1 > 0 iff tp > 0");
    c.expect(conf.tp + conf.fp + conf.fn + conf.tn == n, "every pair counted once");
  }
  return c;
}

Check criterion7() {
  Check c;
  const std::vector<double> gaps = {0.1, 0.2, 10.0, 11.0};
  c.expect(std::abs(estimate_threshold(gaps) - 5.325) <= 1e-9, "threshold on fixture gaps");
  c.expect(estimate_threshold_or(std::vector<double>{}) == 3.0, "empty gaps fallback");
  c.expect(estimate_threshold_or(std::vector<double>{2.0, 2.0, 2.0}) == 3.0,
           "constant gaps fallback");
  c.expect(estimate_threshold_or(std::vector<double>{4.0}) == 3.0, "single gap fallback");
  return c;
}

Check criterion8() {
  Check c;
  std::mt19937_64 rng(4242);
  const fs::path tmp = fs::temp_directory_path() / "addrmatch_acceptance.idx";
  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    const InvertedIndex idx = index_of(oracle::random_corpus(rng, 30, 8, 15));
    save_index(idx, tmp);
    c.expect(load_index(tmp) == idx, "round trip " + std::to_string(trial));
    c.expect(deserialize_index(serialize_index(idx)) == idx, "in-memory round trip");
  }
  // Every single-byte corruption of a few small indexes must be rejected.
  for (int trial = 0; trial < 5 && c.ok; ++trial) {
    const std::string bytes =
        serialize_index(index_of(oracle::random_corpus(rng, 6, 4, 8)));
    const std::size_t vpos = bytes.find("\"version\":") + 10;
    for (std::size_t i = 0; i < bytes.size() && c.ok; ++i) {
      for (unsigned char mask : {0x01, 0x20, 0x80}) {
        std::string bad = bytes;
        bad[i] = static_cast<char>(bad[i] ^ mask);
        const bool in_version = i == vpos;
        try {
          deserialize_index(bad);
          c.expect(false, "corruption at byte " + std::to_string(i) + " accepted");
        } catch (const Error& e) {
          const ErrorCode want = in_version ? ErrorCode::kVersionMismatch : ErrorCode::kCorruptFile;
          c.expect(e.code() == want || (in_version && e.code() == ErrorCode::kCorruptFile),
                   "byte " + std::to_string(i) + ": " + e.what());
        }
      }
    }
    for (std::size_t cut = 0; cut < bytes.size() && c.ok; cut += 7) {
      try {
        deserialize_index(std::string_view(bytes).substr(0, cut));
        c.expect(false, "truncation accepted");
      } catch (const Error& e) {
        c.expect(e.code() == ErrorCode::kCorruptFile, std::string("truncation: ") + e.what());
      }
    }
  }
  fs::remove(tmp);
  return c;
}

Check criterion9(const std::string& exe) {
  Check c;
  if (exe.empty()) {
    c.expect(false, "no executable given");
    return c;
  }
  const fs::path dir = fs::temp_directory_path() / "addrmatch_acceptance_e2e";
  fs::create_directories(dir);
  const std::string corpus = (kFixtures / "sample_corpus.jsonl").string();
  const std::string idx = (dir / "fixture.idx").string();
  auto sh = [](const std::string& cmd) { return std::system((cmd + " >/dev/null").c_str()); };
  c.expect(sh("\"" + exe + "\" index \"" + corpus + "\" -o \"" + idx + "\"") == 0, "index");
  for (const char* out : {"run1.jsonl", "run2.jsonl"}) {
    c.expect(sh("\"" + exe + "\" match-batch \"" + idx + "\" \"" + corpus + "\" \"" +
                (kFixtures / "sample_queries.jsonl").string() + "\" -o \"" +
                (dir / out).string() + "\" --threads 4") == 0,
             "match-batch");
  }
  const std::string a = read_file(dir / "run1.jsonl");
  const std::string b = read_file(dir / "run2.jsonl");
  c.expect(!a.empty() && a == b, "outputs differ");
  fs::remove_all(dir);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  int failures = 0;
  auto report = [&](int n, const char* what, const std::function<Check()>& fn,
                    const std::string* note = nullptr) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failures += !c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
    if (!c.ok) std::cout << " (" << c.detail << ")";
    if (note && !note->empty()) std::cout << " [" << *note << "]";
    std::cout << std::endl;
  };
  std::string cat_summary;
  report(1, "top_k matches brute-force BM25 on 200 random corpora", criterion1);
  report(2, "BM25 limit behaviors for k1=0, b=0, b=1 and clamping", criterion2);
  report(3, "feedback scoring with no judgments equals direct RSJ weighting", criterion3);
  report(4, "rank order and gate decisions on the 30-record fixture", criterion4);
  report(5, "best records and categories for the ten fixture queries",
         [&] { return criterion5(cat_summary); }, &cat_summary);
  report(6, "evaluation arithmetic and randomized metric properties", criterion6);
  report(7, "two-means threshold estimate and degenerate fallback", criterion7);
  report(8, "index round trip and corruption detection", criterion8);
  report(9, "match-batch output is byte-identical across runs", [&] { return criterion9(exe); });
  return failures == 0 ? 0 : 1;
}
