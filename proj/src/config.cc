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

#include "addrmatch/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "addrmatch/error.h"
#include "json.hpp"

namespace addrmatch {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, why);
}

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) invalid(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) invalid(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

}  // namespace

Config Config::parse(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) invalid("config is not valid JSON");
  check_keys(root, "config", {"analyzer", "bm25", "gate", "weights", "bands", "k"});

  Config cfg;
  if (root.contains("analyzer")) {
    const json& a = root["analyzer"];
    check_keys(a, "analyzer", {"stoplist", "abbreviations"});
    auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
      if (!a.contains(key)) return std::nullopt;
      if (!a[key].is_string()) invalid(std::string(key) + " must be a path string");
      std::filesystem::path p = a[key].get<std::string>();
      return p.is_relative() ? base_dir / p : p;
    };
    cfg.stoplist_path = path_of("stoplist");
    cfg.abbreviations_path = path_of("abbreviations");
  }
  if (root.contains("bm25")) {
    const json& b = root["bm25"];
    check_keys(b, "bm25", {"k1", "b", "k3", "clamp_negative_idf"});
    Bm25Params& p = cfg.match.bm25;
    p.k1 = number(b, "k1", p.k1);
    p.b = number(b, "b", p.b);
    p.k3 = number(b, "k3", p.k3);
    if (b.contains("clamp_negative_idf")) {
      if (!b["clamp_negative_idf"].is_boolean()) invalid("clamp_negative_idf must be a boolean");
      p.clamp_negative_idf = b["clamp_negative_idf"].get<bool>();
    }
  }
  if (root.contains("gate")) {
    const json& g = root["gate"];
    check_keys(g, "gate", {"threshold", "rerank_pool_margin"});
    cfg.match.gate.threshold = number(g, "threshold", cfg.match.gate.threshold);
    cfg.match.gate.rerank_pool_margin =
        number(g, "rerank_pool_margin", cfg.match.gate.rerank_pool_margin);
  }
  if (root.contains("weights")) {
    const json& w = root["weights"];
    check_keys(w, "weights",
               {"name", "streetName", "city", "state", "zipCode", "extnZip", "country"});
    for (Field f : kAllFields) {
      const std::string key(field_name(f));
      cfg.match.weights.get(f) = number(w, key.c_str(), cfg.match.weights.get(f));
    }
  }
  if (root.contains("bands")) {
    const json& b = root["bands"];
    check_keys(b, "bands", {"very_high", "high", "medium"});
    cfg.match.bands.very_high = number(b, "very_high", cfg.match.bands.very_high);
    cfg.match.bands.high = number(b, "high", cfg.match.bands.high);
    cfg.match.bands.medium = number(b, "medium", cfg.match.bands.medium);
  }
  if (root.contains("k")) {
    if (!root["k"].is_number_unsigned()) invalid("k must be a positive integer");
    cfg.match.k = root["k"].get<std::size_t>();
  }
  cfg.validate();
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.parent_path());
}

AnalyzerConfig Config::analyzer_config() const {
  AnalyzerConfig a;
  if (stoplist_path) a.stop_list = StopList::load(*stoplist_path);
  if (abbreviations_path) a.abbreviations = AbbreviationTable::load(*abbreviations_path);
  return a;
}

}  // namespace addrmatch
