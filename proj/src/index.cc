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

#include "addrmatch/index.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "addrmatch/error.h"
#include "json.hpp"

namespace addrmatch {
namespace {

using nlohmann::json;

constexpr std::string_view kFormatName = "addr-idx";

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorCode::kCorruptFile, why);
}

double mean_length(const std::vector<std::uint32_t>& doc_len) {
  if (doc_len.empty()) return 0.0;
  const std::uint64_t total =
      std::accumulate(doc_len.begin(), doc_len.end(), std::uint64_t{0});
  return static_cast<double>(total) / static_cast<double>(doc_len.size());
}

}  // namespace

std::span<const Posting> InvertedIndex::postings_for(std::string_view term) const {
  auto it = postings.find(term);
  if (it == postings.end()) return {};
  return it->second;
}

std::size_t InvertedIndex::df(std::string_view term) const {
  return postings_for(term).size();
}

std::uint32_t InvertedIndex::tf(std::string_view term, DocId doc) const {
  auto list = postings_for(term);
  auto it = std::lower_bound(list.begin(), list.end(), doc,
                             [](const Posting& p, DocId d) { return p.doc < d; });
  return it != list.end() && it->doc == doc ? it->tf : 0;
}

InvertedIndex build_index(const std::vector<std::vector<Token>>& docs,
                          std::string analyzer_config_digest,
                          std::string corpus_digest) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no documents to index");
  InvertedIndex index;
  index.n_docs = docs.size();
  index.doc_len.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    index.doc_len.push_back(static_cast<std::uint32_t>(docs[d].size()));
    std::map<std::string_view, std::uint32_t> counts;
    for (const Token& t : docs[d]) ++counts[t];
    for (const auto& [term, tf] : counts) {
      // Documents are visited in order, so each list stays sorted.
      auto it = index.postings.find(term);
      if (it == index.postings.end()) {
        it = index.postings.emplace(std::string(term), std::vector<Posting>{}).first;
      }
      it->second.push_back({static_cast<DocId>(d), tf});
    }
  }
  index.avg_len = mean_length(index.doc_len);
  index.analyzer_config_digest = std::move(analyzer_config_digest);
  index.corpus_digest = std::move(corpus_digest);
  return index;
}

InvertedIndex build_index(const Corpus& corpus, const Analyzer& analyzer) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "corpus has no records");
  std::vector<std::vector<Token>> docs;
  docs.reserve(corpus.size());
  for (const AddressRecord& r : corpus.records) {
    docs.push_back(analyzer.tokenize(r.full_address));
  }
  return build_index(docs, analyzer.config().digest(), corpus.source_digest);
}

std::string serialize_index(const InvertedIndex& index) {
  std::string out;
  json header = {
      {"fmt", kFormatName},
      {"version", InvertedIndex::kFormatVersion},
      {"n_docs", index.n_docs},
      {"avg_len", index.avg_len},
      {"digest", index.analyzer_config_digest},
      {"corpus_digest", index.corpus_digest},
      {"doc_len", index.doc_len},
  };
  out += header.dump();
  out += '\n';
  for (const auto& [term, list] : index.postings) {
    json postings = json::array();
    for (const Posting& p : list) postings.push_back({p.doc, p.tf});
    out += json{{"t", term}, {"p", std::move(postings)}}.dump();
    out += '\n';
  }
  out += json{{"crc32", crc32_hex(out)}}.dump();
  out += '\n';
  return out;
}

InvertedIndex deserialize_index(std::string_view bytes) {
  // The version is checked first so that files from a different format
  // revision are reported as such even when their layout differs.
  const std::size_t header_end = bytes.find('\n');
  if (header_end == std::string_view::npos) corrupt("missing header line");
  json header = json::parse(bytes.substr(0, header_end), nullptr, false);
  if (!header.is_object() || header.value("fmt", "") != kFormatName) {
    corrupt("not an address index header");
  }
  if (!header.contains("version") || !header["version"].is_number_integer()) {
    corrupt("header has no integer version");
  }
  const auto version = header["version"].get<std::int64_t>();
  if (version != InvertedIndex::kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "index format version " + std::to_string(version) +
                    ", expected " + std::to_string(InvertedIndex::kFormatVersion));
  }

  if (bytes.empty() || bytes.back() != '\n') corrupt("truncated file");
  const std::size_t trailer_start = bytes.rfind('\n', bytes.size() - 2);
  if (trailer_start == std::string_view::npos || trailer_start < header_end) {
    corrupt("missing checksum line");
  }
  const std::string_view body = bytes.substr(0, trailer_start + 1);
  json trailer = json::parse(
      bytes.substr(trailer_start + 1, bytes.size() - trailer_start - 2), nullptr,
      false);
  if (!trailer.is_object() || !trailer.contains("crc32") ||
      !trailer["crc32"].is_string()) {
    corrupt("missing checksum line");
  }
  if (trailer["crc32"].get<std::string>() != crc32_hex(body)) {
    corrupt("checksum mismatch");
  }

  InvertedIndex index;
  try {
    index.n_docs = header.at("n_docs").get<std::size_t>();
    index.avg_len = header.at("avg_len").get<double>();
    index.analyzer_config_digest = header.at("digest").get<std::string>();
    index.corpus_digest = header.at("corpus_digest").get<std::string>();
    index.doc_len = header.at("doc_len").get<std::vector<std::uint32_t>>();

    std::size_t pos = header_end + 1;
    while (pos < body.size()) {
      const std::size_t end = body.find('\n', pos);
      json line = json::parse(body.substr(pos, end - pos));
      pos = end + 1;
      std::vector<Posting> list;
      for (const json& p : line.at("p")) {
        list.push_back({p.at(0).get<DocId>(), p.at(1).get<std::uint32_t>()});
      }
      index.postings.emplace(line.at("t").get<std::string>(), std::move(list));
    }
  } catch (const json::exception& e) {
    corrupt(std::string("bad record: ") + e.what());
  }

  if (index.doc_len.size() != index.n_docs) corrupt("doc_len size differs from n_docs");
  if (index.avg_len != mean_length(index.doc_len)) corrupt("avg_len inconsistent");
  for (const auto& [term, list] : index.postings) {
    if (list.empty() || list.size() > index.n_docs) corrupt("bad postings for " + term);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].tf == 0 || list[i].doc >= index.n_docs ||
          (i > 0 && list[i - 1].doc >= list[i].doc)) {
        corrupt("bad postings for " + term);
      }
    }
  }
  return index;
}

void save_index(const InvertedIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << serialize_index(index);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

InvertedIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read index " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_index(buf.str());
}

}  // namespace addrmatch
