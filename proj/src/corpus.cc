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

#include "addrmatch/corpus.h"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "addrmatch/error.h"
#include "json.hpp"

namespace addrmatch {
namespace {

using nlohmann::json;

enum class Column {
  kCity,
  kName,
  kState,
  kCountry,
  kExtnZip,
  kShortId,
  kZipCode,
  kStreetName,
  kAddress,
};

constexpr std::array<std::pair<std::string_view, Column>, 9> kColumns = {{
    {"city", Column::kCity},
    {"name", Column::kName},
    {"state", Column::kState},
    {"country", Column::kCountry},
    {"extnzip", Column::kExtnZip},
    {"shortid", Column::kShortId},
    {"zipcode", Column::kZipCode},
    {"streetname", Column::kStreetName},
    {"address", Column::kAddress},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Column> lookup_column(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& [label, column] : kColumns) {
    if (label == key) return column;
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string& field_of(AddressRecord& r, Column c) {
  switch (c) {
    case Column::kCity: return r.city;
    case Column::kName: return r.name;
    case Column::kState: return r.state;
    case Column::kCountry: return r.country;
    case Column::kExtnZip: return r.extn_zip;
    case Column::kShortId: return r.short_id;
    case Column::kZipCode: return r.zip_code;
    case Column::kStreetName: return r.street_name;
    case Column::kAddress: return r.full_address;
  }
  return r.full_address;
}

// A row as read from the file, before validation.
struct RawRow {
  std::size_t line = 0;
  std::string echo;
  AddressRecord record;
};

[[noreturn]] void malformed(const RawRow& row, std::string_view why) {
  throw Error(ErrorCode::kMalformedRow, "line " + std::to_string(row.line) +
                                            ": " + std::string(why) + ": " +
                                            row.echo);
}

bool all_components_empty(const AddressRecord& r) {
  for (const std::string* f : {&r.name, &r.street_name, &r.city, &r.state,
                               &r.zip_code, &r.country, &r.extn_zip,
                               &r.full_address}) {
    if (!trim(*f).empty()) return false;
  }
  return true;
}

Corpus finish(std::vector<RawRow> rows, std::string_view bytes) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyFile, "no data rows");
  Corpus corpus;
  corpus.records.reserve(rows.size());
  std::unordered_set<std::string> seen;
  std::size_t ordinal = 0;
  for (RawRow& row : rows) {
    ++ordinal;
    AddressRecord& r = row.record;
    if (all_components_empty(r)) malformed(row, "every address component is empty");
    if (trim(r.full_address).empty()) r.full_address = join_full_address(r);
    if (!trim(r.short_id).empty()) {
      r.record_id = std::string(trim(r.short_id));
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%06zu", ordinal);
      r.record_id = buf;
    }
    if (!seen.insert(r.record_id).second) {
      malformed(row, "duplicate record id '" + r.record_id + "'");
    }
    corpus.records.push_back(std::move(r));
  }
  corpus.source_digest = crc32_hex(bytes);
  return corpus;
}

// RFC-4180 reader. Returns records as vectors of fields together with the
// physical line each record starts on.
struct CsvRecord {
  std::size_t line;
  std::string echo;
  std::vector<std::string> fields;
};

std::vector<CsvRecord> read_csv(std::string_view text) {
  std::vector<CsvRecord> out;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    CsvRecord rec{line, {}, {}};
    const std::size_t start = i;
    std::string field;
    bool in_quotes = false;
    bool quoted_field = false;
    bool done = false;
    while (!done) {
      if (i >= text.size()) {
        if (in_quotes) {
          throw Error(ErrorCode::kMalformedRow,
                      "line " + std::to_string(rec.line) +
                          ": unterminated quoted field");
        }
        rec.fields.push_back(std::move(field));
        break;
      }
      const char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      switch (c) {
        case '"':
          if (!field.empty() || quoted_field) {
            throw Error(ErrorCode::kMalformedRow,
                        "line " + std::to_string(line) +
                            ": stray quote inside unquoted field");
          }
          in_quotes = true;
          quoted_field = true;
          ++i;
          break;
        case ',':
          rec.fields.push_back(std::move(field));
          field.clear();
          quoted_field = false;
          ++i;
          break;
        case '\r':
          ++i;
          break;
        case '\n':
          rec.fields.push_back(std::move(field));
          ++line;
          ++i;
          done = true;
          break;
        default:
          field.push_back(c);
          ++i;
      }
    }
    std::string_view raw = text.substr(start, i - start);
    while (!raw.empty() && (raw.back() == '\n' || raw.back() == '\r')) raw.remove_suffix(1);
    rec.echo = std::string(raw);
    const bool blank = rec.fields.size() == 1 && trim(rec.fields[0]).empty();
    if (!blank) out.push_back(std::move(rec));
  }
  return out;
}

std::vector<RawRow> parse_csv_rows(std::string_view text) {
  std::vector<CsvRecord> recs = read_csv(text);
  if (recs.empty()) throw Error(ErrorCode::kEmptyFile, "file has no header");
  std::vector<Column> header;
  for (const std::string& name : recs[0].fields) {
    auto col = lookup_column(trim(name));
    if (!col) throw Error(ErrorCode::kUnknownColumn, "'" + name + "'");
    if (std::find(header.begin(), header.end(), *col) != header.end()) {
      throw Error(ErrorCode::kMalformedRow,
                  "line 1: duplicate column '" + name + "'");
    }
    header.push_back(*col);
  }
  std::vector<RawRow> rows;
  for (std::size_t r = 1; r < recs.size(); ++r) {
    RawRow row{recs[r].line, recs[r].echo, {}};
    if (recs[r].fields.size() != header.size()) {
      malformed(row, "expected " + std::to_string(header.size()) +
                         " fields, found " +
                         std::to_string(recs[r].fields.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      field_of(row.record, header[c]) = std::move(recs[r].fields[c]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> parse_jsonl_rows(std::string_view text) {
  std::vector<RawRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    RawRow row{line_no, std::string(trim(line)), {}};
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!obj.is_object()) malformed(row, "not a JSON object");
    for (const auto& [key, value] : obj.items()) {
      auto col = lookup_column(key);
      if (!col) {
        throw Error(ErrorCode::kUnknownColumn,
                    "'" + key + "' on line " + std::to_string(line_no));
      }
      std::string& dst = field_of(row.record, *col);
      if (value.is_string()) {
        dst = value.get<std::string>();
      } else if (value.is_null()) {
        dst.clear();
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        dst = value.dump();
      } else {
        malformed(row, "field '" + key + "' is not a string");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string join_full_address(const AddressRecord& r) {
  std::string out;
  for (const std::string* f : {&r.name, &r.street_name, &r.city, &r.state,
                               &r.zip_code, &r.country}) {
    std::string_view part = trim(*f);
    if (part.empty()) continue;
    if (!out.empty()) out += ", ";
    out += part;
  }
  return out;
}

CorpusFormat format_for_path(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".csv" ? CorpusFormat::kCsv
                                                    : CorpusFormat::kJsonl;
}

Corpus parse_corpus(std::string_view bytes, CorpusFormat format) {
  std::string_view text = bytes;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  if (trim(text).empty()) throw Error(ErrorCode::kEmptyFile, "no content");
  std::vector<RawRow> rows = format == CorpusFormat::kCsv
                                 ? parse_csv_rows(text)
                                 : parse_jsonl_rows(text);
  return finish(std::move(rows), bytes);
}

Corpus ingest(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), format);
}

Corpus ingest(const std::filesystem::path& path) {
  return ingest(path, format_for_path(path));
}

void export_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const AddressRecord& r : corpus.records) {
    json obj = json::object();
    obj["name"] = r.name;
    obj["streetName"] = r.street_name;
    obj["city"] = r.city;
    obj["state"] = r.state;
    obj["zipCode"] = r.zip_code;
    obj["extnZip"] = r.extn_zip;
    obj["country"] = r.country;
    obj["shortID"] = r.short_id;
    obj["Address"] = r.full_address;
    out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

std::string crc32_hex(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
                static_cast<uInt>(bytes.size()));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

}  // namespace addrmatch
