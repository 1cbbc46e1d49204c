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

#include "addrmatch/reranker.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "addrmatch/error.h"

namespace addrmatch {

double ComponentWeights::get(Field field) const {
  return const_cast<ComponentWeights*>(this)->get(field);
}

double& ComponentWeights::get(Field field) {
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

double ComponentWeights::sum() const {
  double s = 0.0;
  for (Field f : kAllFields) s += get(f);
  return s;
}

void ComponentWeights::validate() const {
  for (Field f : kAllFields) {
    if (!(get(f) >= 0.0) || !std::isfinite(get(f))) {
      throw Error(ErrorCode::kInvalidConfig,
                  "weight for " + std::string(field_name(f)) + " must be >= 0");
    }
  }
  if (std::abs(sum() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidConfig,
                "component weights sum to " + std::to_string(sum()) + ", not 1");
  }
}

ComponentWeights ComponentWeights::normalized() const {
  const double s = sum();
  if (!(s > 0.0)) throw Error(ErrorCode::kInvalidConfig, "all component weights are zero");
  ComponentWeights out = *this;
  for (Field f : kAllFields) out.get(f) /= s;
  return out;
}

ComponentWeights ComponentWeights::restricted_to(const ParsedAddress& present) const {
  ComponentWeights out = *this;
  for (Field f : kAllFields) {
    if (present.get(f).empty()) out.get(f) = 0.0;
  }
  if (!(out.sum() > 0.0)) return *this;
  return out.normalized();
}

void GateConfig::validate() const {
  if (!(threshold > 0.0)) throw Error(ErrorCode::kInvalidConfig, "gate threshold must be > 0");
  if (!(rerank_pool_margin >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "rerank pool margin must be >= 0");
  }
}

void CategoryBands::validate() const {
  if (!(1.0 >= very_high && very_high > high && high > medium && medium > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "category bands need 1 >= very_high > high > medium > 0");
  }
}

std::string_view category_name(Category category) {
  switch (category) {
    case Category::kVeryHigh: return "VeryHigh";
    case Category::kHigh: return "High";
    case Category::kMedium: return "Medium";
    case Category::kLow: return "Low";
  }
  return "Low";
}

GateDecision gate(std::span<const ScoredCandidate> candidates, const GateConfig& cfg) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "nothing to gate");
  const ScoredCandidate& top = candidates.front();
  if (candidates.size() == 1 || top.bm25 - candidates[1].bm25 > cfg.threshold) {
    return {GateDecision::Kind::kDirectAccept, {top}};
  }
  GateDecision d{GateDecision::Kind::kReRank, {}};
  for (const ScoredCandidate& c : candidates) {
    if (top.bm25 - c.bm25 <= cfg.rerank_pool_margin) d.pool.push_back(c);
  }
  return d;
}

double estimate_threshold(std::span<const double> gaps) {
  if (gaps.empty()) throw Error(ErrorCode::kDegenerateGaps, "no gaps");
  const auto [lo_it, hi_it] = std::minmax_element(gaps.begin(), gaps.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(lo < hi)) throw Error(ErrorCode::kDegenerateGaps, "all gaps are equal");

  std::vector<bool> upper(gaps.size(), false);
  for (int iter = 0; iter < 1000; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      // Ties go to the lower cluster.
      const bool u = std::abs(gaps[i] - hi) < std::abs(gaps[i] - lo);
      if (u != upper[i]) changed = true;
      upper[i] = u;
    }
    if (!changed) break;
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t n_lo = 0, n_hi = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (upper[i]) {
        sum_hi += gaps[i];
        ++n_hi;
      } else {
        sum_lo += gaps[i];
        ++n_lo;
      }
    }
    lo = sum_lo / static_cast<double>(n_lo);
    hi = sum_hi / static_cast<double>(n_hi);
  }
  return (lo + hi) / 2.0;
}

double estimate_threshold_or(std::span<const double> gaps, double fallback) {
  try {
    return estimate_threshold(gaps);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateGaps) throw;
    return fallback;
  }
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

double normalized_edit_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double longest = static_cast<double>(std::max(a.size(), b.size()));
  return 1.0 - static_cast<double>(levenshtein(a, b)) / longest;
}

double component_similarity(const ParsedAddress& a, const ParsedAddress& b,
                            const ComponentWeights& weights,
                            const FieldSimilarity& sim) {
  double total = 0.0;
  for (Field f : kAllFields) {
    const double w = weights.get(f);
    if (w == 0.0) continue;
    total += w * sim(a.get(f), b.get(f));
  }
  return std::clamp(total, 0.0, 1.0);
}

Category categorize(double similarity, const CategoryBands& bands) {
  if (!(similarity >= 0.0 && similarity <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange,
                "similarity " + std::to_string(similarity) + " outside [0, 1]");
  }
  if (similarity >= bands.very_high) return Category::kVeryHigh;
  if (similarity >= bands.high) return Category::kHigh;
  if (similarity >= bands.medium) return Category::kMedium;
  return Category::kLow;
}

}  // namespace addrmatch
