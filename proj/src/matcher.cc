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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

#include "addrmatch/error.h"

namespace addrmatch {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void MatchConfig::validate() const {
  bm25.validate();
  gate.validate();
  weights.validate();
  bands.validate();
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "retrieval depth k must be >= 1");
  if (!similarity) throw Error(ErrorCode::kInvalidConfig, "no similarity function");
}

std::string_view decision_name(DecisionPath path) {
  return path == DecisionPath::kReRanked ? "ReRanked" : "DirectAccept";
}

ParsedAddress components_of(const AddressRecord& r) {
  ParsedAddress p;
  p.name = r.name;
  p.street_name = r.street_name;
  p.city = r.city;
  p.state = r.state;
  p.zip_code = r.zip_code;
  p.extn_zip = r.extn_zip;
  p.country = r.country;
  return p;
}

Matcher::Matcher(const Corpus& corpus, const InvertedIndex& index,
                 const Analyzer& analyzer, MatchConfig config)
    : corpus_(corpus), index_(index), analyzer_(analyzer), config_(std::move(config)) {
  config_.validate();
  if (index_.n_docs != corpus_.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "index has " + std::to_string(index_.n_docs) +
                    " documents but corpus has " + std::to_string(corpus_.size()));
  }
  if (!index_.analyzer_config_digest.empty() &&
      index_.analyzer_config_digest != analyzer_.config().digest()) {
    throw Error(ErrorCode::kInvalidConfig,
                "index was built with a different analyzer configuration");
  }
}

ParsedAddress Matcher::query_components(std::string_view query_text) const {
  return analyzer_.normalize(analyzer_.parse_components(query_text));
}

ParsedAddress Matcher::record_components(DocId doc) const {
  return analyzer_.normalize(components_of(corpus_.records.at(doc)));
}

MatchResult Matcher::match(std::string_view query_text) const {
  std::vector<ScoredCandidate> candidates =
      top_k(query_text, analyzer_, index_, config_.bm25, config_.k);
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoCandidates,
                "no indexed term in '" + std::string(query_text) + "'");
  }
  const GateDecision decision = gate(candidates, config_.gate);
  const ParsedAddress query = query_components(query_text);
  const ComponentWeights weights = config_.weights.restricted_to(query);

  std::size_t best = 0;
  std::vector<double> sims;
  for (std::size_t i = 0; i < decision.pool.size(); ++i) {
    sims.push_back(component_similarity(query, record_components(decision.pool[i].doc),
                                        weights, config_.similarity));
    const ScoredCandidate& c = decision.pool[i];
    const ScoredCandidate& b = decision.pool[best];
    if (sims[i] > sims[best] ||
        (sims[i] == sims[best] && (c.bm25 > b.bm25 || (c.bm25 == b.bm25 && c.doc < b.doc)))) {
      best = i;
    }
  }

  MatchResult result;
  result.query_text = std::string(query_text);
  result.doc = decision.pool[best].doc;
  result.best = corpus_.records[result.doc];
  result.bm25_score = decision.pool[best].bm25;
  result.similarity = sims[best];
  result.category = categorize(sims[best], config_.bands);
  result.pool_size = decision.pool.size();
  if (decision.kind == GateDecision::Kind::kReRank) {
    result.decision_path = DecisionPath::kReRanked;
    result.rerank_score = sims[best];
    for (std::size_t i = 0; i < decision.pool.size(); ++i) {
      for (ScoredCandidate& c : candidates) {
        if (c.doc == decision.pool[i].doc) c.rerank = sims[i];
      }
    }
  }
  result.candidates = std::move(candidates);
  return result;
}

std::vector<BatchRow> Matcher::match_batch(std::span<const BatchQuery> queries,
                                           unsigned threads) const {
  std::vector<BatchRow> rows(queries.size());
  auto run_row = [&](std::size_t i) {
    rows[i].query = queries[i];
    try {
      rows[i].result = match(queries[i].text);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, queries.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < queries.size(); ++i) run_row(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < queries.size(); i = next++) run_row(i);
    });
  }
  workers.clear();
  return rows;
}

ordered_json to_json(const MatchResult& r) {
  ordered_json j;
  j["query"] = r.query_text;
  j["record_id"] = r.best.record_id;
  j["address"] = r.best.full_address;
  j["bm25"] = r.bm25_score;
  j["rerank"] = r.rerank_score ? ordered_json(*r.rerank_score) : ordered_json(nullptr);
  j["similarity"] = r.similarity;
  j["category"] = category_name(r.category);
  j["decision"] = decision_name(r.decision_path);
  j["pool_size"] = r.pool_size;
  return j;
}

ordered_json to_json(const BatchRow& row) {
  ordered_json j;
  j["id"] = row.query.id;
  j["query"] = row.query.text;
  j["ok"] = row.result.has_value();
  if (row.result) {
    const ordered_json fields = to_json(*row.result);
    for (auto& [key, value] : fields.items()) {
      if (key != "query") j[key] = value;
    }
  } else {
    j["error"] = row.error;
  }
  return j;
}

std::vector<BatchQuery> parse_batch_queries(std::string_view text) {
  std::vector<BatchQuery> out;
  std::optional<bool> jsonl;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!jsonl) jsonl = line.front() == '{';
    if (!*jsonl) {
      out.push_back({std::to_string(line_no), std::string(line)});
      continue;
    }
    json obj = json::parse(line, nullptr, false);
    if (!obj.is_object() || !obj.contains("query") || !obj["query"].is_string()) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": expected {\"id\":..., \"query\":...}");
    }
    std::string id = std::to_string(line_no);
    if (obj.contains("id") && !obj["id"].is_null()) {
      id = obj["id"].is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
    }
    out.push_back({std::move(id), obj["query"].get<std::string>()});
  }
  return out;
}

}  // namespace addrmatch
