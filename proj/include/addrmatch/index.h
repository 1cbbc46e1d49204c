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

#ifndef ADDRMATCH_INDEX_H_
#define ADDRMATCH_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addrmatch/analyzer.h"
#include "addrmatch/corpus.h"

namespace addrmatch {

// Position of a record in its corpus.
using DocId = std::uint32_t;

struct Posting {
  DocId doc = 0;
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

// Term -> postings (ascending doc id), per-document token counts and the
// collection statistics BM25 needs. Immutable once built.
struct InvertedIndex {
  static constexpr int kFormatVersion = 1;

  std::map<std::string, std::vector<Posting>, std::less<>> postings;
  std::vector<std::uint32_t> doc_len;
  std::size_t n_docs = 0;
  double avg_len = 0.0;
  std::string analyzer_config_digest;
  std::string corpus_digest;

  std::size_t df(std::string_view term) const;
  // Term frequency of `term` in `doc`, 0 when absent.
  std::uint32_t tf(std::string_view term, DocId doc) const;
  std::span<const Posting> postings_for(std::string_view term) const;

  bool operator==(const InvertedIndex&) const = default;
};

// Tokenizes every record's full address. Throws kEmptyCorpus.
InvertedIndex build_index(const Corpus& corpus, const Analyzer& analyzer);

// Builds directly from pre-tokenized documents; doc ids follow the input order.
InvertedIndex build_index(const std::vector<std::vector<Token>>& docs,
                          std::string analyzer_config_digest = {},
                          std::string corpus_digest = {});

// Line-oriented JSON: a header object, one object per term, and a trailing
// {"crc32": ...} line covering every preceding byte.
std::string serialize_index(const InvertedIndex& index);
InvertedIndex deserialize_index(std::string_view bytes);

void save_index(const InvertedIndex& index, const std::filesystem::path& path);
// Throws kIo, kVersionMismatch or kCorruptFile.
InvertedIndex load_index(const std::filesystem::path& path);

}  // namespace addrmatch

#endif  // ADDRMATCH_INDEX_H_
