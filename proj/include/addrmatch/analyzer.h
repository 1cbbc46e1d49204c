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

#ifndef ADDRMATCH_ANALYZER_H_
#define ADDRMATCH_ANALYZER_H_

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace addrmatch {

// A normalized term: lowercase ASCII alphanumerics, never empty, never
// containing whitespace.
using Token = std::string;

class StopList {
 public:
  StopList() = default;
  explicit StopList(std::set<std::string, std::less<>> terms);

  // {"the", "of", "and"}.
  static StopList defaults();
  // One term per line; blank lines and lines starting with '#' are skipped.
  static StopList parse(std::string_view text);
  static StopList load(const std::filesystem::path& path);

  bool contains(std::string_view term) const { return terms_.contains(term); }
  const std::set<std::string, std::less<>>& terms() const { return terms_; }

 private:
  std::set<std::string, std::less<>> terms_;
};

struct Abbreviation {
  std::string expansion;
  // Expand only once a token containing a digit has been seen earlier in the
  // same text (e.g. "st" after a house number means "street").
  bool after_number = false;

  bool operator==(const Abbreviation&) const = default;
};

class AbbreviationTable {
 public:
  AbbreviationTable() = default;

  static AbbreviationTable defaults();
  // Lines of "short<TAB>long" with an optional third column "after-number".
  static AbbreviationTable parse(std::string_view text);
  static AbbreviationTable load(const std::filesystem::path& path);

  void add(std::string short_form, std::string long_form,
           bool after_number = false);
  const Abbreviation* find(std::string_view short_form) const;
  const std::map<std::string, Abbreviation, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, Abbreviation, std::less<>> entries_;
};

struct AnalyzerConfig {
  StopList stop_list = StopList::defaults();
  AbbreviationTable abbreviations = AbbreviationTable::defaults();

  // Checksum over the tables and the analysis rules version. Indexes record
  // it so that a query-time analyzer mismatch can be detected.
  std::string digest() const;
};

enum class Field { kName, kStreetName, kCity, kState, kZipCode, kExtnZip, kCountry };

inline constexpr std::array<Field, 7> kAllFields = {
    Field::kName,    Field::kStreetName, Field::kCity,    Field::kState,
    Field::kZipCode, Field::kExtnZip,    Field::kCountry};

// Column name used in files and JSON ("name", "streetName", ...).
std::string_view field_name(Field field);

struct ParsedAddress {
  std::string name;
  std::string street_name;
  std::string city;
  std::string state;
  std::string zip_code;
  std::string extn_zip;
  std::string country;

  const std::string& get(Field field) const;
  std::string& get(Field field);
  bool empty() const;

  bool operator==(const ParsedAddress&) const = default;
};

class Analyzer {
 public:
  Analyzer();
  explicit Analyzer(AnalyzerConfig config);

  // Lowercases, strips contact noise (emails, phone numbers, times, and the
  // labels TEL/ATTN/PH/EMAIL/FAX/CTC/C/O/A/C), splits on punctuation,
  // whitespace and camelCase or letter-digit joins, expands abbreviations
  // and removes stop words. Order is preserved.
  std::vector<Token> tokenize(std::string_view text) const;

  // Segments free text into address components. Every returned field is a
  // contiguous run of tokenize(text). Throws kUnparsableAddress when nothing
  // can be assigned.
  ParsedAddress parse_components(std::string_view text) const;

  // Comparison form of a single component: tokenized, secondary unit
  // designators removed, legal-entity suffixes dropped from names, country
  // aliases canonicalized, tokens sorted.
  std::string normalize_component(Field field, std::string_view text) const;
  ParsedAddress normalize(const ParsedAddress& parsed) const;

  const AnalyzerConfig& config() const { return config_; }

 private:
  struct Piece {
    Token text;
    int segment;
  };
  std::vector<Piece> analyze(std::string_view text) const;

  AnalyzerConfig config_;
};

// Tokenizes with the default abbreviation table and the given stop list.
std::vector<Token> tokenize(std::string_view text, const StopList& stop);

}  // namespace addrmatch

#endif  // ADDRMATCH_ANALYZER_H_
