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

#ifndef ADDRMATCH_CONFIG_H_
#define ADDRMATCH_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string_view>

#include "addrmatch/analyzer.h"
#include "addrmatch/matcher.h"

namespace addrmatch {

// Everything the command-line tool can configure. Unset fields keep the
// library defaults.
//
//   {
//     "analyzer": {"stoplist": "stop.txt", "abbreviations": "abbr.tsv"},
//     "bm25": {"k1": 1.5, "b": 0.75, "k3": 1.5, "clamp_negative_idf": true},
//     "gate": {"threshold": 3.0, "rerank_pool_margin": 3.0},
//     "weights": {"name": 0.21, "streetName": 0.23, ...},
//     "bands": {"very_high": 0.95, "high": 0.85, "medium": 0.70},
//     "k": 10
//   }
struct Config {
  std::optional<std::filesystem::path> stoplist_path;
  std::optional<std::filesystem::path> abbreviations_path;
  MatchConfig match;

  // Relative analyzer paths resolve against `base_dir`. Unknown keys and
  // invariant violations throw kInvalidConfig.
  static Config parse(std::string_view json_text,
                      const std::filesystem::path& base_dir = {});
  static Config load(const std::filesystem::path& path);

  AnalyzerConfig analyzer_config() const;
  void validate() const { match.validate(); }
};

}  // namespace addrmatch

#endif  // ADDRMATCH_CONFIG_H_
