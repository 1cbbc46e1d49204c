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

#ifndef ADDRMATCH_CORPUS_H_
#define ADDRMATCH_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace addrmatch {

// One structured row of the address corpus. Field names in files are the
// camelCase column names (name, streetName, city, state, zipCode, extnZip,
// country, shortID, Address).
struct AddressRecord {
  std::string record_id;
  std::string name;
  std::string street_name;
  std::string city;
  std::string state;
  std::string country;
  std::string zip_code;
  std::string extn_zip;
  std::string short_id;
  std::string full_address;

  bool operator==(const AddressRecord&) const = default;
};

// Joins the non-empty, whitespace-trimmed components with ", " in the order
// name, street, city, state, zip, country.
std::string join_full_address(const AddressRecord& record);

// An immutable, ordered collection of records. Position in `records` is the
// document id used by the index.
struct Corpus {
  std::vector<AddressRecord> records;
  std::string source_digest;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

enum class CorpusFormat { kCsv, kJsonl };

// Picks the format from the file extension (.csv, otherwise JSONL).
CorpusFormat format_for_path(const std::filesystem::path& path);

// Parses corpus bytes. Column names are matched case-insensitively; absent
// columns read as empty. Rows without an Address get one synthesized by
// join_full_address. record_id is shortID when present, else the 1-based row
// ordinal zero-padded to six digits.
//
// Throws Error with kEmptyFile, kUnknownColumn or kMalformedRow (message
// carries the line number and the offending row).
Corpus parse_corpus(std::string_view bytes, CorpusFormat format);

// Reads and parses a corpus file. Throws kIo if it cannot be read.
Corpus ingest(const std::filesystem::path& path, CorpusFormat format);
Corpus ingest(const std::filesystem::path& path);

// Writes one JSON object per record using the file column names.
void export_jsonl(const Corpus& corpus, std::ostream& out);

// Hex CRC-32 of a byte string.
std::string crc32_hex(std::string_view bytes);

}  // namespace addrmatch

#endif  // ADDRMATCH_CORPUS_H_
