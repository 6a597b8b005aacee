// Copyright 2026 The rulebridge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Gold annotations, first/top-five/no-result scoring, method comparison,
// annotation sampling and dataset statistics.

#ifndef RULEBRIDGE_EVALUATION_H_
#define RULEBRIDGE_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rulebridge/catalog.h"
#include "rulebridge/pipeline.h"

namespace rulebridge {

enum class GoldLabel { kBestMatch, kAmbiguous, kNone };

struct AnnotationRecord {
  std::string source_name;
  TermKind kind = TermKind::kTrigger;
  GoldLabel label = GoldLabel::kNone;
  std::string best_match;  // set iff label == kBestMatch
};

// One JSON object per line:
//   {"name": ..., "kind": "trigger", "label": "best_match", "match": ...}
//   {"name": ..., "kind": "action", "label": "ambiguous" | "none"}
std::vector<AnnotationRecord> parse_annotations(std::istream &in);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path &path);

// Throws kInvalidInput when a best match is not an ontology term of the
// annotation's kind.
void validate_annotations(std::span<const AnnotationRecord> annotations,
                          const OntologyCatalog &ontology);

inline constexpr std::size_t kEvaluationCutoff = 5;

struct MethodSummary {
  Method method = Method::kCombined;
  std::size_t first_result = 0;
  std::size_t top_five = 0;  // gold match at ranks 2..cutoff
  std::size_t no_result = 0;
  std::size_t ambiguous_excluded = 0;

  std::size_t found() const { return first_result + top_five; }
  std::size_t considered() const { return first_result + top_five + no_result; }
  bool operator==(const MethodSummary &) const = default;
};

// Buckets every non-ambiguous annotation by the rank of its gold match within
// the first `cutoff` candidates of the matching result. Gold label "none"
// always lands in no_result. Throws kNotFound for an annotation without a
// result.
MethodSummary score_method(std::span<const TranslationResult> results,
                           std::span<const AnnotationRecord> annotations,
                           std::size_t cutoff = kEvaluationCutoff);

// Best first: most matches within the cutoff, then most first results, then
// fewest no-results. Stable for full ties. Needs at least two summaries over
// the same number of considered annotations.
std::vector<MethodSummary> compare_methods(std::vector<MethodSummary> summaries);

// Uniform sample without replacement, in a seed-determined order. The
// generator is std::mt19937_64 with a portable bounded draw, so samples are
// identical across standard libraries.
std::vector<CatalogTerm> sample_for_annotation(const ProprietaryCatalog &catalog,
                                               TermKind kind, std::size_t n,
                                               std::uint64_t seed);

struct KindStats {
  std::size_t distinct = 0;
  std::size_t once_only = 0;
  std::size_t duplicates = 0;  // distinct names used more than once
  std::size_t distinct_raw = 0;  // before cleaning
  std::size_t dropped = 0;       // rows whose name was empty after cleaning
  std::uint64_t total_usage = 0;
};

struct DatasetStats {
  std::size_t total_recipes = 0;
  KindStats triggers;
  KindStats actions;
};

DatasetStats dataset_stats(const RawRecipeSet &raw, const ProprietaryCatalog &catalog);

nlohmann::ordered_json to_json(const MethodSummary &summary);
nlohmann::ordered_json to_json(const DatasetStats &stats);

// Aligned table with columns Approach / First Result / Top Five Result /
// No result.
std::string format_summary_table(std::span<const MethodSummary> summaries);
std::string format_stats(const DatasetStats &stats);

}  // namespace rulebridge

#endif  // RULEBRIDGE_EVALUATION_H_
