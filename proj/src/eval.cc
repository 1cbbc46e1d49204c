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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <thread>

#include "addrmatch/error.h"

namespace addrmatch {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<double> sorted_unique(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Metrics metrics_from(const Confusion& c) {
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = c.tp == 0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Outcome classify(const LabeledPair& pair, const std::optional<MatchResult>& prediction) {
  const bool returned = prediction && prediction->category != Category::kLow;
  if (!returned) {
    return pair.is_matchable() ? Outcome::kFalseNegative : Outcome::kTrueNegative;
  }
  if (pair.is_matchable() && prediction->best.record_id == *pair.gold_record_id) {
    return Outcome::kTruePositive;
  }
  return Outcome::kFalsePositive;
}

EvalReport evaluate(std::span<const LabeledPair> pairs, const Matcher& matcher) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyPairs, "no labeled pairs");
  EvalReport report;
  for (const LabeledPair& pair : pairs) {
    std::optional<MatchResult> prediction;
    try {
      prediction = matcher.match(pair.query);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoCandidates &&
          e.code() != ErrorCode::kUnparsableAddress) {
        throw;
      }
    }
    const Outcome o = classify(pair, prediction);
    report.outcomes.push_back(o);
    switch (o) {
      case Outcome::kTruePositive: ++report.confusion.tp; break;
      case Outcome::kFalsePositive: ++report.confusion.fp; break;
      case Outcome::kFalseNegative: ++report.confusion.fn; break;
      case Outcome::kTrueNegative: ++report.confusion.tn; break;
    }
  }
  report.metrics = metrics_from(report.confusion);
  return report;
}

GridResult grid_search(std::span<const LabeledPair> pairs, const Corpus& corpus,
                       const InvertedIndex& index, const Analyzer& analyzer,
                       const MatchConfig& base, std::span<const double> k1_values,
                       std::span<const double> b_values,
                       std::span<const double> k3_values, unsigned threads) {
  if (k1_values.empty() || b_values.empty() || k3_values.empty()) {
    throw Error(ErrorCode::kEmptyGrid, "every parameter range needs a value");
  }
  if (pairs.empty()) throw Error(ErrorCode::kEmptyPairs, "no labeled pairs");

  GridResult result;
  for (double k1 : sorted_unique(k1_values)) {
    for (double b : sorted_unique(b_values)) {
      for (double k3 : sorted_unique(k3_values)) {
        Bm25Params p = base.bm25;
        p.k1 = k1;
        p.b = b;
        p.k3 = k3;
        p.validate();
        result.table.push_back({p, {}});
      }
    }
  }

  auto run_point = [&](std::size_t i) {
    MatchConfig cfg = base;
    cfg.bm25 = result.table[i].params;
    Matcher matcher(corpus, index, analyzer, cfg);
    result.table[i].report = evaluate(pairs, matcher);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.table.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < result.table.size(); ++i) run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < result.table.size(); i = next++) run_point(i);
      });
    }
  }

  // The table is in (k1, b, k3) order, so a strict comparison keeps the
  // first, i.e. smallest, point among equal F1 scores.
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    if (result.table[i].report.metrics.f1 > result.table[best].report.metrics.f1) best = i;
  }
  result.best = result.table[best].params;
  result.best_metrics = result.table[best].report.metrics;
  return result;
}

std::vector<LabeledPair> parse_labeled_pairs(std::string_view text) {
  std::vector<LabeledPair> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      continue;
    }
    json obj = json::parse(line, nullptr, false);
    const bool ok = obj.is_object() && obj.contains("query") && obj["query"].is_string() &&
                    obj.contains("gold") &&
                    (obj["gold"].is_string() || obj["gold"].is_null());
    if (!ok) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) +
                      ": expected {\"query\": ..., \"gold\": ...|null}");
    }
    LabeledPair pair{obj["query"].get<std::string>(), std::nullopt};
    if (obj["gold"].is_string()) pair.gold_record_id = obj["gold"].get<std::string>();
    out.push_back(std::move(pair));
  }
  return out;
}

ordered_json to_json(const EvalReport& report) {
  ordered_json j;
  j["precision"] = report.metrics.precision;
  j["recall"] = report.metrics.recall;
  j["f1"] = report.metrics.f1;
  j["tp"] = report.confusion.tp;
  j["fp"] = report.confusion.fp;
  j["fn"] = report.confusion.fn;
  j["tn"] = report.confusion.tn;
  return j;
}

std::string format_report(const EvalReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-10s %-10s %-10s %5s %5s %5s %5s\n"
                "%-10.4f %-10.4f %-10.4f %5zu %5zu %5zu %5zu\n",
                "PRECISION", "RECALL", "F1", "TP", "FP", "FN", "TN",
                report.metrics.precision, report.metrics.recall, report.metrics.f1,
                report.confusion.tp, report.confusion.fp, report.confusion.fn,
                report.confusion.tn);
  return buf;
}

std::string format_grid(const GridResult& grid) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-6s %-6s %-6s %-10s %-10s %-10s\n", "K1", "B", "K3",
                "PRECISION", "RECALL", "F1");
  out += buf;
  for (const GridPoint& p : grid.table) {
    std::snprintf(buf, sizeof(buf), "%-6.3g %-6.3g %-6.3g %-10.4f %-10.4f %-10.4f%s\n",
                  p.params.k1, p.params.b, p.params.k3, p.report.metrics.precision,
                  p.report.metrics.recall, p.report.metrics.f1,
                  p.params == grid.best ? "  *" : "");
    out += buf;
  }
  return out;
}

}  // namespace addrmatch
