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

#include "addrmatch/cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "addrmatch/analyzer.h"
#include "addrmatch/bm25.h"
#include "addrmatch/config.h"
#include "addrmatch/corpus.h"
#include "addrmatch/error.h"
#include "addrmatch/eval.h"
#include "addrmatch/index.h"
#include "addrmatch/matcher.h"
#include "addrmatch/reranker.h"

namespace addrmatch::cli {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Flags shared by the subcommands that run the pipeline. Flags override the
// config file, which overrides the defaults.
struct PipelineOptions {
  std::string config_path;
  std::string stoplist_path;
  std::string abbreviations_path;
  std::optional<double> k1, b, k3, threshold, pool_margin;
  std::optional<std::size_t> k;
  bool no_clamp = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--stoplist", stoplist_path, "Stop list file (one term per line)");
    cmd->add_option("--abbreviations", abbreviations_path,
                    "Abbreviation table (short<TAB>long)");
    cmd->add_option("--k1", k1, "BM25 term-frequency saturation");
    cmd->add_option("--b", b, "BM25 length normalization in [0, 1]");
    cmd->add_option("--k3", k3, "BM25 query term-frequency saturation");
    cmd->add_flag("--no-clamp", no_clamp, "Keep negative log(N/df) weights");
    cmd->add_option("--threshold", threshold, "Rank-1/rank-2 gap for direct accept");
    cmd->add_option("--pool-margin", pool_margin, "Score margin for the re-rank pool");
    cmd->add_option("--k", k, "Retrieval depth");
  }

  Config resolve() const {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    if (!stoplist_path.empty()) cfg.stoplist_path = stoplist_path;
    if (!abbreviations_path.empty()) cfg.abbreviations_path = abbreviations_path;
    if (k1) cfg.match.bm25.k1 = *k1;
    if (b) cfg.match.bm25.b = *b;
    if (k3) cfg.match.bm25.k3 = *k3;
    if (no_clamp) cfg.match.bm25.clamp_negative_idf = false;
    if (threshold) cfg.match.gate.threshold = *threshold;
    if (pool_margin) cfg.match.gate.rerank_pool_margin = *pool_margin;
    if (k) cfg.match.k = *k;
    cfg.validate();
    return cfg;
  }
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

// Loaded corpus + index + analyzer, checked for consistency.
struct Pipeline {
  Config config;
  Analyzer analyzer;
  Corpus corpus;
  InvertedIndex index;

  Pipeline(const PipelineOptions& opts, const std::string& index_path,
           const std::string& corpus_path)
      : config(opts.resolve()),
        analyzer(config.analyzer_config()),
        corpus(ingest(corpus_path)),
        index(load_index(index_path)) {
    if (index.corpus_digest != corpus.source_digest) {
      throw Error(ErrorCode::kInvalidConfig,
                  "index " + index_path + " was not built from " + corpus_path);
    }
  }

  Matcher matcher() const { return Matcher(corpus, index, analyzer, config.match); }
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void print_human(std::ostream& out, const Matcher& matcher, const MatchResult& r,
                 bool explain) {
  const QueryVector query =
      QueryVector::from_tokens(matcher.analyzer().tokenize(r.query_text));
  out << pad("RANK", 6) << pad("SCORE", 20) << "ADDRESS\n";
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const ScoredCandidate& c = r.candidates[i];
    out << pad(std::to_string(i + 1) + ".", 6) << pad(fixed(c.bm25, 12), 20)
        << matcher.corpus().records[c.doc].full_address << '\n';
    if (explain) {
      for (const TermContribution& t :
           explain_doc(query, c.doc, matcher.index(), matcher.config().bm25)) {
        out << "        " << pad(t.term, 16) << "weight " << fixed(t.weight, 6)
            << "  tf " << t.tf_doc << "  qtf " << t.tf_query << "  +"
            << fixed(t.summand, 12) << '\n';
      }
    }
  }
  out << '\n';
  out << "decision: " << decision_name(r.decision_path) << " (pool " << r.pool_size
      << ")\n";
  out << "best:     " << r.best.full_address << " [" << r.best.record_id << "]\n";
  out << "category: " << category_name(r.category) << " (similarity "
      << fixed(r.similarity, 4) << ")\n";
  if (explain) {
    const ParsedAddress q = matcher.query_components(r.query_text);
    const ParsedAddress rec = matcher.record_components(r.doc);
    const ComponentWeights w = matcher.config().weights.restricted_to(q);
    out << "\n" << pad("COMPONENT", 12) << pad("WEIGHT", 9) << pad("SIM", 9)
        << pad("SHARE", 9) << "QUERY | RECORD\n";
    for (Field f : kAllFields) {
      const double sim = matcher.config().similarity(q.get(f), rec.get(f));
      out << pad(std::string(field_name(f)), 12) << pad(fixed(w.get(f), 4), 9)
          << pad(fixed(sim, 4), 9) << pad(fixed(w.get(f) * sim, 4), 9) << q.get(f)
          << " | " << rec.get(f) << '\n';
    }
  }
}

ordered_json json_result(const Matcher& matcher, const MatchResult& r, bool explain) {
  const QueryVector query =
      QueryVector::from_tokens(matcher.analyzer().tokenize(r.query_text));
  ordered_json j;
  j["query"] = r.query_text;
  ordered_json cands = ordered_json::array();
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const ScoredCandidate& c = r.candidates[i];
    ordered_json row;
    row["rank"] = i + 1;
    row["record_id"] = matcher.corpus().records[c.doc].record_id;
    row["score"] = c.bm25;
    row["address"] = matcher.corpus().records[c.doc].full_address;
    row["rerank"] = c.rerank ? ordered_json(*c.rerank) : ordered_json(nullptr);
    if (explain) {
      ordered_json terms = ordered_json::array();
      for (const TermContribution& t :
           explain_doc(query, c.doc, matcher.index(), matcher.config().bm25)) {
        terms.push_back({{"term", t.term},
                         {"weight", t.weight},
                         {"tf_doc", t.tf_doc},
                         {"tf_query", t.tf_query},
                         {"summand", t.summand}});
      }
      row["explain"] = std::move(terms);
    }
    cands.push_back(std::move(row));
  }
  j["candidates"] = std::move(cands);
  j["match"] = to_json(r);
  if (explain) {
    const ParsedAddress q = matcher.query_components(r.query_text);
    const ParsedAddress rec = matcher.record_components(r.doc);
    const ComponentWeights w = matcher.config().weights.restricted_to(q);
    ordered_json comps = ordered_json::array();
    for (Field f : kAllFields) {
      const double sim = matcher.config().similarity(q.get(f), rec.get(f));
      comps.push_back({{"component", field_name(f)},
                       {"weight", w.get(f)},
                       {"similarity", sim},
                       {"query", q.get(f)},
                       {"record", rec.get(f)}});
    }
    j["components"] = std::move(comps);
  }
  return j;
}

std::string dump(const ordered_json& j, int indent = -1) {
  return j.dump(indent, ' ', false, ordered_json::error_handler_t::replace);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Match free-text postal addresses against a structured corpus."};
  app.name(args.empty() ? "addrmatch" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  // index
  std::string corpus_path, output_path, format;
  PipelineOptions opts;
  CLI::App* index_cmd = app.add_subcommand("index", "Build an index from a corpus file");
  index_cmd->add_option("corpus", corpus_path, "Corpus (.csv or .jsonl)")->required();
  index_cmd->add_option("-o,--output", output_path, "Index file to write")->required();
  index_cmd->add_option("--format", format, "Corpus format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  index_cmd->add_option("--config", opts.config_path, "JSON config file");
  index_cmd->add_option("--stoplist", opts.stoplist_path, "Stop list file");
  index_cmd->add_option("--abbreviations", opts.abbreviations_path, "Abbreviation table");

  // export
  CLI::App* export_cmd = app.add_subcommand("export", "Re-write a corpus as JSONL");
  export_cmd->add_option("corpus", corpus_path, "Corpus (.csv or .jsonl)")->required();
  export_cmd->add_option("-o,--output", output_path, "JSONL file to write")->required();

  // query
  std::string index_path, query_text;
  bool explain = false, as_json = false;
  CLI::App* query_cmd = app.add_subcommand("query", "Match one address");
  query_cmd->add_option("index", index_path, "Index file")->required();
  query_cmd->add_option("corpus", corpus_path, "Corpus the index was built from")->required();
  query_cmd->add_option("text", query_text, "Free-text address")->required();
  query_cmd->add_flag("--explain", explain, "Show BM25 summands and component shares");
  query_cmd->add_flag("--json", as_json, "Print one JSON object");
  opts.attach(query_cmd);

  // match-batch
  std::string queries_path;
  unsigned threads = 0;
  CLI::App* batch_cmd = app.add_subcommand("match-batch", "Match a file of queries");
  batch_cmd->add_option("index", index_path, "Index file")->required();
  batch_cmd->add_option("corpus", corpus_path, "Corpus the index was built from")->required();
  batch_cmd->add_option("queries", queries_path, "Text (one per line) or JSONL queries")
      ->required();
  batch_cmd->add_option("-o,--output", output_path, "JSONL results")->required();
  batch_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  opts.attach(batch_cmd);

  // eval
  std::string pairs_path;
  std::vector<double> grid_k1, grid_b, grid_k3;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Precision/recall/F1 on labeled pairs");
  eval_cmd->add_option("index", index_path, "Index file")->required();
  eval_cmd->add_option("corpus", corpus_path, "Corpus the index was built from")->required();
  eval_cmd->add_option("pairs", pairs_path, "JSONL {\"query\", \"gold\"}")->required();
  eval_cmd->add_flag("--json", as_json, "Print JSON");
  eval_cmd->add_option("--grid-k1", grid_k1, "Grid search values for k1")->delimiter(',');
  eval_cmd->add_option("--grid-b", grid_b, "Grid search values for b")->delimiter(',');
  eval_cmd->add_option("--grid-k3", grid_k3, "Grid search values for k3")->delimiter(',');
  eval_cmd->add_option("--threads", threads, "Worker threads for the grid (0 = all cores)");
  opts.attach(eval_cmd);

  // estimate-threshold
  CLI::App* est_cmd = app.add_subcommand(
      "estimate-threshold", "Estimate the gap threshold from calibration queries");
  est_cmd->add_option("index", index_path, "Index file")->required();
  est_cmd->add_option("corpus", corpus_path, "Corpus the index was built from")->required();
  est_cmd->add_option("queries", queries_path, "Calibration queries")->required();
  est_cmd->add_flag("--json", as_json, "Print JSON");
  opts.attach(est_cmd);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("addrmatch");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (index_cmd->parsed()) {
      const Config cfg = opts.resolve();
      const Analyzer analyzer(cfg.analyzer_config());
      const Corpus corpus =
          format.empty() ? ingest(corpus_path)
                         : ingest(corpus_path, format == "csv" ? CorpusFormat::kCsv
                                                               : CorpusFormat::kJsonl);
      const InvertedIndex index = build_index(corpus, analyzer);
      save_index(index, output_path);
      out << "indexed " << index.n_docs << " records, " << index.postings.size()
          << " terms -> " << output_path << '\n';
    } else if (export_cmd->parsed()) {
      const Corpus corpus = ingest(corpus_path);
      std::ofstream file = open_output(output_path);
      export_jsonl(corpus, file);
      out << "exported " << corpus.size() << " records -> " << output_path << '\n';
    } else if (query_cmd->parsed()) {
      const Pipeline p(opts, index_path, corpus_path);
      const Matcher matcher = p.matcher();
      const MatchResult r = matcher.match(query_text);
      if (as_json) {
        out << dump(json_result(matcher, r, explain)) << '\n';
      } else {
        print_human(out, matcher, r, explain);
      }
    } else if (batch_cmd->parsed()) {
      const Pipeline p(opts, index_path, corpus_path);
      const Matcher matcher = p.matcher();
      const std::vector<BatchQuery> queries = parse_batch_queries(read_text(queries_path));
      const std::vector<BatchRow> rows = matcher.match_batch(queries, threads);
      std::ofstream file = open_output(output_path);
      std::size_t failed = 0;
      for (const BatchRow& row : rows) {
        if (!row.result) ++failed;
        file << dump(to_json(row)) << '\n';
      }
      out << "matched " << rows.size() - failed << " of " << rows.size() << " queries -> "
          << output_path << '\n';
    } else if (eval_cmd->parsed()) {
      const Pipeline p(opts, index_path, corpus_path);
      const std::vector<LabeledPair> pairs = parse_labeled_pairs(read_text(pairs_path));
      if (!grid_k1.empty() || !grid_b.empty() || !grid_k3.empty()) {
        const Bm25Params& base = p.config.match.bm25;
        if (grid_k1.empty()) grid_k1 = {base.k1};
        if (grid_b.empty()) grid_b = {base.b};
        if (grid_k3.empty()) grid_k3 = {base.k3};
        const GridResult grid = grid_search(pairs, p.corpus, p.index, p.analyzer,
                                            p.config.match, grid_k1, grid_b, grid_k3,
                                            threads);
        if (as_json) {
          ordered_json j;
          j["best"] = {{"k1", grid.best.k1}, {"b", grid.best.b}, {"k3", grid.best.k3}};
          ordered_json table = ordered_json::array();
          for (const GridPoint& g : grid.table) {
            ordered_json row = {{"k1", g.params.k1}, {"b", g.params.b}, {"k3", g.params.k3}};
            const ordered_json report = to_json(g.report);
            for (auto& [key, value] : report.items()) row[key] = value;
            table.push_back(std::move(row));
          }
          j["table"] = std::move(table);
          out << dump(j) << '\n';
        } else {
          out << format_grid(grid);
        }
      } else {
        const EvalReport report = evaluate(pairs, p.matcher());
        out << (as_json ? dump(to_json(report)) + "\n" : format_report(report));
      }
    } else if (est_cmd->parsed()) {
      const Pipeline p(opts, index_path, corpus_path);
      const std::vector<BatchQuery> queries = parse_batch_queries(read_text(queries_path));
      std::vector<double> gaps;
      const std::size_t depth = std::max<std::size_t>(2, p.config.match.k);
      for (const BatchQuery& q : queries) {
        const auto cands = top_k(q.text, p.analyzer, p.index, p.config.match.bm25, depth);
        if (cands.size() >= 2) gaps.push_back(cands[0].bm25 - cands[1].bm25);
      }
      bool degenerate = false;
      double threshold = p.config.match.gate.threshold;
      try {
        threshold = estimate_threshold(gaps);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateGaps) throw;
        degenerate = true;
        threshold = 3.0;
      }
      if (as_json) {
        ordered_json j;
        j["threshold"] = threshold;
        j["gaps"] = gaps.size();
        j["fallback"] = degenerate;
        out << dump(j) << '\n';
      } else {
        out << "gaps:      " << gaps.size() << '\n';
        out << "threshold: " << fixed(threshold, 6)
            << (degenerate ? "  (degenerate gaps, using default)" : "") << '\n';
      }
    }
  } catch (const Error& e) {
    err << app.get_name() << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << app.get_name() << ": internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace addrmatch::cli
