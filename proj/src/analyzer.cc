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

#include "addrmatch/analyzer.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "addrmatch/corpus.h"
#include "addrmatch/error.h"

namespace addrmatch {
namespace {

// Bumped whenever tokenization rules change in a way that alters output.
constexpr std::string_view kRulesVersion = "analyzer-rules-1";

constexpr std::array<std::string_view, 64> kRegionCodes = {
    "al", "ak", "az", "ar", "ca", "co", "ct", "de", "fl", "ga", "hi", "id", "il",
    "in", "ia", "ks", "ky", "la", "me", "md", "ma", "mi", "mn", "ms", "mo", "mt",
    "ne", "nv", "nh", "nj", "nm", "ny", "nc", "nd", "oh", "ok", "or", "pa", "ri",
    "sc", "sd", "tn", "tx", "ut", "vt", "va", "wa", "wv", "wi", "wy", "dc", "pr",
    // Canadian provinces and territories.
    "ab", "bc", "mb", "nb", "nl", "ns", "nt", "nu", "on", "pe", "qc", "sk"};

constexpr std::array<std::string_view, 21> kStreetSuffixes = {
    "road",    "street", "drive",  "boulevard", "avenue",     "way",
    "lane",    "court",  "highway", "parkway",  "place",      "circle",
    "terrace", "trail",  "square", "pike",      "expressway", "freeway",
    "loop",    "alley",  "row"};

constexpr std::array<std::string_view, 10> kUnitDesignators = {
    "suite", "unit", "building", "bldg", "dock",
    "apartment", "floor", "room", "ste", "apt"};

constexpr std::array<std::string_view, 4> kDirections = {"north", "south", "east",
                                                          "west"};

constexpr std::array<std::string_view, 12> kEntitySuffixes = {
    "inc", "llc", "ltd", "corp", "co", "company",
    "plc", "lp", "llp", "gmbh", "pvt", "limited"};

constexpr std::array<std::string_view, 9> kNoiseLabels = {
    "tel", "telephone", "phone", "ph", "fax", "attn", "email", "ctc", "mob"};

struct CountryAlias {
  std::vector<std::string_view> words;
  std::string_view canonical;
};

// Longest aliases first so that multi-word phrases win.
const std::vector<CountryAlias>& country_aliases() {
  static const std::vector<CountryAlias> aliases = {
      {{"united", "states", "america"}, "usa"},
      {{"united", "kingdom"}, "united kingdom"},
      {{"united", "states"}, "usa"},
      {{"usa"}, "usa"},
      {{"us"}, "usa"},
      {{"canada"}, "canada"},
      {{"india"}, "india"},
      {{"mexico"}, "mexico"},
      {{"uk"}, "united kingdom"},
  };
  return aliases;
}

template <std::size_t N>
bool in(const std::array<std::string_view, N>& table, std::string_view w) {
  return std::find(table.begin(), table.end(), w) != table.end();
}

bool has_digit(std::string_view w) {
  return std::any_of(w.begin(), w.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool all_digits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool is_zip5(std::string_view w) { return w.size() == 5 && all_digits(w); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = end + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Punctuation-bearing noise is removed before splitting; each hit becomes a
// segment break.
std::string strip_punctuated_noise(std::string_view text) {
  static const std::regex kEmail(R"([^\s,;]+@[^\s,;]+)");
  static const std::regex kTime(R"(\b\d{1,2}:\d{2}(\s*[ap]\.?m\b\.?)?)",
                                std::regex::icase);
  static const std::regex kCareOf(R"(\b(c/o|a/c)\b)", std::regex::icase);
  static const std::regex kEmailLabel(R"(\be-?mail\b)", std::regex::icase);
  std::string out(text);
  for (const std::regex* re : {&kEmail, &kTime, &kCareOf, &kEmailLabel}) {
    out = std::regex_replace(out, *re, ",");
  }
  return out;
}

struct RawWord {
  std::string text;
  int segment;
};

std::vector<RawWord> split_words(std::string_view text) {
  std::vector<RawWord> out;
  std::string cur;
  int segment = 0;
  auto flush = [&] {
    if (!cur.empty()) out.push_back({lower(cur), segment});
    cur.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      if (!cur.empty()) {
        const auto prev = static_cast<unsigned char>(cur.back());
        if ((std::islower(prev) && std::isupper(u)) ||
            (std::isalpha(prev) && std::isdigit(u))) {
          flush();
        }
      }
      cur.push_back(c);
    } else {
      flush();
      if (c == ',' || c == ';' || c == '\n' || c == '|') ++segment;
    }
  }
  flush();
  return out;
}

// Drops phone numbers written as 3-3-4 digit groups or a single ten-digit
// run, repeating until nothing changes.
void drop_phone_numbers(std::vector<RawWord>& words) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::string& w = words[i].text;
      if (w.size() == 10 && all_digits(w)) {
        words.erase(words.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (i + 2 < words.size() && w.size() == 3 && all_digits(w) &&
          words[i + 1].text.size() == 3 && all_digits(words[i + 1].text) &&
          words[i + 2].text.size() == 4 && all_digits(words[i + 2].text)) {
        words.erase(words.begin() + static_cast<std::ptrdiff_t>(i),
                    words.begin() + static_cast<std::ptrdiff_t>(i + 3));
        changed = true;
        break;
      }
    }
  }
}

std::optional<std::size_t> country_phrase_at(const std::vector<std::string>& ws,
                                             std::size_t i,
                                             std::string_view* canonical) {
  for (const CountryAlias& alias : country_aliases()) {
    if (i + alias.words.size() > ws.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < alias.words.size(); ++k) {
      if (ws[i + k] != alias.words[k]) {
        match = false;
        break;
      }
    }
    if (match) {
      if (canonical) *canonical = alias.canonical;
      return alias.words.size();
    }
  }
  return std::nullopt;
}

std::string join(const std::vector<std::string>& ws, std::size_t begin,
                 std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end && i < ws.size(); ++i) {
    if (!out.empty()) out.push_back(' ');
    out += ws[i];
  }
  return out;
}

}  // namespace

StopList::StopList(std::set<std::string, std::less<>> terms)
    : terms_(std::move(terms)) {}

StopList StopList::defaults() { return StopList({"the", "of", "and"}); }

StopList StopList::parse(std::string_view text) {
  std::set<std::string, std::less<>> terms;
  for (std::string_view line : lines_of(text)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    terms.insert(lower(line));
  }
  return StopList(std::move(terms));
}

StopList StopList::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

AbbreviationTable AbbreviationTable::defaults() {
  AbbreviationTable t;
  for (auto [s, l] : std::initializer_list<std::pair<const char*, const char*>>{
           {"rd", "road"},       {"str", "street"},   {"ave", "avenue"},
           {"av", "avenue"},     {"blvd", "boulevard"}, {"dr", "drive"},
           {"ln", "lane"},       {"ct", "court"},     {"hwy", "highway"},
           {"pkwy", "parkway"},  {"pky", "parkway"},  {"pl", "place"},
           {"cir", "circle"},    {"ter", "terrace"},  {"trl", "trail"},
           {"sq", "square"},     {"expy", "expressway"}, {"fwy", "freeway"},
           {"ste", "suite"},     {"apt", "apartment"}, {"bldg", "building"},
           {"rm", "room"},       {"incorporated", "inc"},
           {"corporation", "corp"}}) {
    t.add(s, l);
  }
  for (auto [s, l] : std::initializer_list<std::pair<const char*, const char*>>{
           {"st", "street"}, {"n", "north"}, {"s", "south"},
           {"e", "east"},    {"w", "west"}}) {
    t.add(s, l, /*after_number=*/true);
  }
  return t;
}

AbbreviationTable AbbreviationTable::parse(std::string_view text) {
  AbbreviationTable t;
  std::size_t line_no = 0;
  for (std::string_view line : lines_of(text)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      cols.push_back(trim(line.substr(pos, tab == std::string_view::npos
                                               ? std::string_view::npos
                                               : tab - pos)));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() ||
        cols[1].empty() || (cols.size() == 3 && cols[2] != "after-number")) {
      throw Error(ErrorCode::kInvalidConfig,
                  "abbreviation line " + std::to_string(line_no) +
                      ": expected short<TAB>long[<TAB>after-number]");
    }
    t.add(lower(cols[0]), lower(cols[1]), cols.size() == 3);
  }
  return t;
}

AbbreviationTable AbbreviationTable::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

void AbbreviationTable::add(std::string short_form, std::string long_form,
                            bool after_number) {
  entries_[std::move(short_form)] = Abbreviation{std::move(long_form), after_number};
}

const Abbreviation* AbbreviationTable::find(std::string_view short_form) const {
  auto it = entries_.find(short_form);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string AnalyzerConfig::digest() const {
  std::string canon(kRulesVersion);
  canon += "\nstop:";
  for (const std::string& t : stop_list.terms()) canon += t + ",";
  canon += "\nabbr:";
  for (const auto& [k, v] : abbreviations.entries()) {
    canon += k + "\t" + v.expansion + (v.after_number ? "\t1" : "\t0") + ";";
  }
  return crc32_hex(canon);
}

std::string_view field_name(Field field) {
  switch (field) {
    case Field::kName: return "name";
    case Field::kStreetName: return "streetName";
    case Field::kCity: return "city";
    case Field::kState: return "state";
    case Field::kZipCode: return "zipCode";
    case Field::kExtnZip: return "extnZip";
    case Field::kCountry: return "country";
  }
  return "";
}

const std::string& ParsedAddress::get(Field field) const {
  return const_cast<ParsedAddress*>(this)->get(field);
}

std::string& ParsedAddress::get(Field field) {
  switch (field) {
    case Field::kName: return name;
    case Field::kStreetName: return street_name;
    case Field::kCity: return city;
    case Field::kState: return state;
    case Field::kZipCode: return zip_code;
    case Field::kExtnZip: return extn_zip;
    case Field::kCountry: return country;
  }
  return name;
}

bool ParsedAddress::empty() const {
  return std::all_of(kAllFields.begin(), kAllFields.end(),
                     [this](Field f) { return get(f).empty(); });
}

Analyzer::Analyzer() : Analyzer(AnalyzerConfig{}) {}

Analyzer::Analyzer(AnalyzerConfig config) : config_(std::move(config)) {}

std::vector<Analyzer::Piece> Analyzer::analyze(std::string_view text) const {
  std::vector<RawWord> words = split_words(strip_punctuated_noise(text));
  std::erase_if(words, [this](const RawWord& w) {
    return in(kNoiseLabels, w.text) || config_.stop_list.contains(w.text);
  });
  drop_phone_numbers(words);

  std::vector<Piece> out;
  out.reserve(words.size());
  bool seen_digit = false;
  for (RawWord& w : words) {
    const Abbreviation* abbr = config_.abbreviations.find(w.text);
    if (abbr != nullptr && (!abbr->after_number || seen_digit)) {
      std::istringstream parts(abbr->expansion);
      std::string part;
      while (parts >> part) {
        if (config_.stop_list.contains(part)) continue;
        seen_digit = seen_digit || has_digit(part);
        out.push_back({part, w.segment});
      }
      continue;
    }
    seen_digit = seen_digit || has_digit(w.text);
    out.push_back({std::move(w.text), w.segment});
  }
  return out;
}

std::vector<Token> Analyzer::tokenize(std::string_view text) const {
  std::vector<Token> out;
  for (Piece& p : analyze(text)) out.push_back(std::move(p.text));
  return out;
}

ParsedAddress Analyzer::parse_components(std::string_view text) const {
  const std::vector<Piece> pieces = analyze(text);
  std::vector<std::string> ws;
  std::vector<int> seg;
  for (const Piece& p : pieces) {
    ws.push_back(p.text);
    seg.push_back(p.segment);
  }
  const std::size_t n = ws.size();
  ParsedAddress out;

  // Only country words (or nothing) may follow a trailing zip or state.
  auto tail_is_country = [&](std::size_t from) {
    std::size_t i = from;
    while (i < n) {
      auto len = country_phrase_at(ws, i, nullptr);
      if (!len) return false;
      i += *len;
    }
    return true;
  };

  std::optional<std::size_t> zip, state;
  for (std::size_t i = n; i-- > 1;) {
    if (is_zip5(ws[i]) && in(kRegionCodes, ws[i - 1])) {
      zip = i;
      state = i - 1;
      break;
    }
  }
  if (!zip) {
    for (std::size_t i = n; i-- > 0;) {
      std::size_t after = i + 1;
      if (after < n && ws[after].size() == 4 && all_digits(ws[after])) ++after;
      if (is_zip5(ws[i]) && tail_is_country(after)) {
        zip = i;
        break;
      }
    }
  }
  if (!state && !zip) {
    for (std::size_t i = n; i-- > 0;) {
      if (in(kRegionCodes, ws[i]) && tail_is_country(i + 1)) {
        state = i;
        break;
      }
    }
  }

  std::size_t tail_start = n;  // first index after zip/state (+extn)
  if (zip) {
    out.zip_code = ws[*zip];
    tail_start = *zip + 1;
    if (tail_start < n && ws[tail_start].size() == 4 && all_digits(ws[tail_start])) {
      out.extn_zip = ws[tail_start];
      ++tail_start;
    }
  } else if (state) {
    tail_start = *state + 1;
  }
  if (state) out.state = ws[*state];

  std::size_t region_end = state ? *state : zip ? *zip : n;
  if (zip || state) {
    for (std::size_t i = tail_start; i < n; ++i) {
      if (auto len = country_phrase_at(ws, i, nullptr)) {
        out.country = join(ws, i, i + *len);
        break;
      }
    }
  } else {
    // No zip or state: accept a country phrase that ends the text.
    for (std::size_t i = 0; i < n; ++i) {
      auto len = country_phrase_at(ws, i, nullptr);
      if (len && i + *len == n && i > 0) {
        out.country = join(ws, i, n);
        region_end = i;
        break;
      }
    }
  }

  auto is_unit = [&](std::size_t i) { return in(kUnitDesignators, ws[i]); };

  std::optional<std::size_t> house;
  for (std::size_t i = 0; i < region_end; ++i) {
    if (has_digit(ws[i]) && !(i > 0 && is_unit(i - 1))) {
      house = i;
      break;
    }
  }

  if (house) {
    std::size_t name_end = *house;
    if (name_end >= 2 && is_unit(name_end - 2) && has_digit(ws[name_end - 1])) {
      name_end -= 2;
    } else if (name_end >= 1 && is_unit(name_end - 1)) {
      name_end -= 1;
    }
    out.name = join(ws, 0, name_end);

    std::optional<std::size_t> suffix;
    for (std::size_t i = *house; i < region_end; ++i) {
      if (in(kStreetSuffixes, ws[i])) suffix = i;
    }
    std::size_t street_end;
    if (suffix) {
      street_end = *suffix + 1;
      while (street_end < region_end && seg[street_end] == seg[*suffix] &&
             (has_digit(ws[street_end]) || in(kDirections, ws[street_end]) ||
              is_unit(street_end))) {
        ++street_end;
      }
    } else {
      street_end = *house + 1;
      while (street_end < region_end && seg[street_end] == seg[*house]) ++street_end;
    }
    out.street_name = join(ws, *house, street_end);
    out.city = join(ws, street_end, region_end);
  } else if (region_end > 0) {
    // No house number: the last segment before the state is the city, and
    // anything earlier is the name.
    std::size_t city_start = region_end - 1;
    while (city_start > 0 && seg[city_start - 1] == seg[region_end - 1]) --city_start;
    out.name = join(ws, 0, city_start);
    out.city = join(ws, city_start, region_end);
  }

  if (out.empty()) {
    throw Error(ErrorCode::kUnparsableAddress,
                "no address component found in '" + std::string(text) + "'");
  }
  return out;
}

std::string Analyzer::normalize_component(Field field, std::string_view text) const {
  std::vector<Token> tokens = tokenize(text);
  std::vector<Token> kept;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (in(kUnitDesignators, tokens[i])) {
      if (i + 1 < tokens.size() && has_digit(tokens[i + 1])) ++i;
      continue;
    }
    if (field == Field::kName && in(kEntitySuffixes, tokens[i])) continue;
    kept.push_back(std::move(tokens[i]));
  }
  if (field == Field::kCountry && !kept.empty()) {
    std::string_view canonical;
    auto len = country_phrase_at(kept, 0, &canonical);
    if (len && *len == kept.size()) return std::string(canonical);
  }
  std::sort(kept.begin(), kept.end());
  return join(kept, 0, kept.size());
}

ParsedAddress Analyzer::normalize(const ParsedAddress& parsed) const {
  ParsedAddress out;
  for (Field f : kAllFields) out.get(f) = normalize_component(f, parsed.get(f));
  return out;
}

std::vector<Token> tokenize(std::string_view text, const StopList& stop) {
  AnalyzerConfig config;
  config.stop_list = stop;
  return Analyzer(std::move(config)).tokenize(text);
}

}  // namespace addrmatch
