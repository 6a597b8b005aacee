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

// Translation of proprietary trigger/action names into ranked ontology
// candidates.
//
// Every proprietary name is scored against every ontology term of the same
// kind (triggers never match actions). Three strategies:
//
//   embedding   cosine of mean word vectors, candidates below the threshold
//               dropped, sorted by similarity.
//   entailment  entailment percentage with the proprietary name as premise,
//               no threshold, sorted by entailment.
//   combined    embedding survivors (all of them, not only the top n) are
//               re-scored with entailment; combined = (100 * similarity +
//               entailment) / 2, sorted by combined.
//
// Ties on the sort key are broken by ascending candidate name. Results keep
// the full ranked list; `top_n` only limits presentation and evaluation.

#ifndef RULEBRIDGE_PIPELINE_H_
#define RULEBRIDGE_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rulebridge/catalog.h"
#include "rulebridge/review.h"
#include "rulebridge/scoring.h"
#include "rulebridge/types.h"

namespace rulebridge {

enum class EntailmentBackend { kProxy, kRemote };

std::string_view to_string(EntailmentBackend backend);
std::optional<EntailmentBackend> parse_entailment_backend(std::string_view text);

inline constexpr double kDefaultThreshold = 0.55;
inline constexpr std::size_t kDefaultTopN = 5;

struct PipelineConfig {
  double threshold = kDefaultThreshold;
  std::size_t top_n = kDefaultTopN;
  Method method = Method::kCombined;
  EntailmentBackend entailment_backend = EntailmentBackend::kProxy;

  // Throws kInvalidInput unless 0 <= threshold <= 1 and top_n >= 1.
  void validate() const;
};

struct ScoredCandidate {
  std::string source_name;
  TermKind kind = TermKind::kTrigger;
  std::string candidate_name;
  std::optional<double> embedding;      // 0..1
  std::optional<double> embedding_pct;  // exactly 100 * embedding
  std::optional<EntailmentTriple> entailment;
  std::optional<double> combined_pct;
  std::size_t rank = 0;  // 1-based
  bool pinned_by_review = false;

  bool operator==(const ScoredCandidate &) const = default;
};

struct TranslationResult {
  std::string source_name;
  TermKind kind = TermKind::kTrigger;
  Method method = Method::kCombined;
  std::vector<ScoredCandidate> candidates;  // full ranked list
  bool no_result = true;
  // Candidates set aside when a reviewer marked the term "none suitable".
  std::vector<ScoredCandidate> advisory;
  std::string diagnostic;

  std::span<const ScoredCandidate> top(std::size_t n) const;
  bool operator==(const TranslationResult &) const = default;
};

// Sort key of a candidate under `method`; absent scores count as 0.
double sort_key(const ScoredCandidate &candidate, Method method);

TranslationResult translate_embedding(std::string_view source, TermKind kind,
                                      const OntologyCatalog &ontology,
                                      const PipelineConfig &config,
                                      const SimilarityScorer &similarity);

TranslationResult translate_entailment(std::string_view source, TermKind kind,
                                       const OntologyCatalog &ontology,
                                       const PipelineConfig &config,
                                       const EntailmentScorer &entailment);

TranslationResult translate_combined(std::string_view source, TermKind kind,
                                     const OntologyCatalog &ontology,
                                     const PipelineConfig &config,
                                     const SimilarityScorer &similarity,
                                     const EntailmentScorer &entailment);

struct Scorers {
  const SimilarityScorer *similarity = nullptr;
  const EntailmentScorer *entailment = nullptr;
};

// Dispatches on config.method.
TranslationResult translate(std::string_view source, TermKind kind,
                            const OntologyCatalog &ontology,
                            const PipelineConfig &config, const Scorers &scorers);

struct TermError {
  std::string source_name;
  TermKind kind = TermKind::kTrigger;
  std::string message;
};

struct BatchOutput {
  std::vector<TranslationResult> results;  // catalog order: triggers, then actions
  std::vector<TermError> errors;
};

// One result per catalog term. A term that fails is emitted as no_result with
// the error as its diagnostic and also listed in `errors`; the batch carries
// on. `workers` > 1 fans terms out over threads without changing the output.
BatchOutput translate_batch(const ProprietaryCatalog &catalog,
                            const OntologyCatalog &ontology,
                            const PipelineConfig &config, const Scorers &scorers,
                            std::size_t workers = 1);

// Pins a reviewer's choice at rank 1, or marks the term no_result when the
// reviewer found nothing suitable.
TranslationResult apply_review_overrides(TranslationResult result,
                                         const ReviewLookup &reviews);

// Canonical records use the legacy field names ifttt_name, eupont_hypothesis,
// spacy_similarity (percent), allen_nlp_entailment, allen_nlp_contradiction,
// allen_nlp_neutral and combined_similarity.
nlohmann::ordered_json candidate_record(const ScoredCandidate &candidate);
ScoredCandidate candidate_from_json(const nlohmann::json &record);

// `limit` == 0 keeps every candidate.
nlohmann::ordered_json to_json(const TranslationResult &result, std::size_t limit = 0);
TranslationResult result_from_json(const nlohmann::json &doc);

// One compact JSON document per line; byte-stable for identical inputs.
std::string canonical_jsonl(std::span<const TranslationResult> results,
                            std::size_t limit = 0);

// Legacy listing shapes: embedding results as [{candidate: {ifttt_name,
// similarity}}], entailment results as [[record, ...]], combined results as
// [record, ...].
nlohmann::ordered_json paper_compat(const TranslationResult &result,
                                    std::size_t limit);

}  // namespace rulebridge

#endif  // RULEBRIDGE_PIPELINE_H_
