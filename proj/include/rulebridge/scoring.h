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

// Scorer contracts and implementations.
//
// Embedding similarity lives on the 0..1 scale. Entailment scorers return a
// triple of percentages (entailment, contradiction, neutral) that sums to
// 100. Entailment is directional: the premise is the proprietary name and the
// hypothesis the ontology term.

#ifndef RULEBRIDGE_SCORING_H_
#define RULEBRIDGE_SCORING_H_

#include <chrono>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rulebridge/embedvec.h"

namespace rulebridge {

struct EmbeddingScore {
  double value = 0.0;  // cosine clamped into [0, 1]
  bool degenerate = false;
};

struct EntailmentTriple {
  double entailment = 0.0;
  double contradiction = 0.0;
  double neutral = 0.0;

  double sum() const { return entailment + contradiction + neutral; }
  bool operator==(const EntailmentTriple &) const = default;
};

// Default tolerance on the sum-to-100 contract for externally produced
// triples.
inline constexpr double kTripleSumTolerance = 0.01;

// Throws Error(kInvalidInput) naming the violated invariant.
void validate_triple(const EntailmentTriple &triple,
                     double tolerance = kTripleSumTolerance);

nlohmann::json to_json(const EntailmentTriple &triple);
// Parses {"entailment", "contradiction", "neutral"}; throws kParse.
EntailmentTriple triple_from_json(const nlohmann::json &doc);

class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual EmbeddingScore score(std::string_view source,
                               std::string_view candidate) const = 0;
  // False when the text has nothing the scorer can represent.
  virtual bool covers(std::string_view text) const { return !text.empty(); }
};

class VectorSimilarity : public SimilarityScorer {
 public:
  explicit VectorSimilarity(const VectorStore &store) : store_(store) {}

  EmbeddingScore score(std::string_view source,
                       std::string_view candidate) const override;
  bool covers(std::string_view text) const override;

 private:
  const VectorStore &store_;
};

EmbeddingScore embedding_score(std::string_view source, std::string_view candidate,
                               const VectorStore &store);

struct EntailPair {
  std::string premise;
  std::string hypothesis;
};

class EntailmentScorer {
 public:
  virtual ~EntailmentScorer() = default;
  virtual EntailmentTriple entail(std::string_view premise,
                                  std::string_view hypothesis) const = 0;
  // Results in request order.
  virtual std::vector<EntailmentTriple> entail_batch(
      std::span<const EntailPair> pairs) const;
};

struct AntonymPair {
  std::string first;
  std::string second;
};

std::vector<AntonymPair> default_antonym_pairs();

// Deterministic lexical stand-in for a trained entailment model.
//
//   coverage      = |premise tokens ∩ hypothesis tokens| / |hypothesis tokens|
//   entailment    = 100 * coverage
//   contradiction = 0.6 * rest if an antonym pair straddles the two texts,
//                   0.1 * rest otherwise (rest = 100 - entailment)
//   neutral       = rest - contradiction
//
// Token sets, not multisets. Throws kInvalidInput for an empty hypothesis.
class ProxyEntailment : public EntailmentScorer {
 public:
  explicit ProxyEntailment(std::vector<AntonymPair> antonyms = default_antonym_pairs())
      : antonyms_(std::move(antonyms)) {}

  EntailmentTriple entail(std::string_view premise,
                          std::string_view hypothesis) const override;

 private:
  std::vector<AntonymPair> antonyms_;
};

EntailmentTriple proxy_entailment(std::string_view premise,
                                  std::string_view hypothesis);

struct RemoteEntailmentConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:8500"
  int max_in_flight = 4;
  int retries = 2;  // extra attempts after a transport failure
  std::chrono::milliseconds timeout{10000};
};

// Client for the entailment wire protocol:
//   POST /entail        {"premise", "hypothesis"} -> triple
//   POST /entail/batch  [{"premise", "hypothesis"}, ...] -> [triple, ...]
// Transport failures, malformed bodies and triples that break the sum-to-100
// contract all surface as Error(kUnavailable).
class RemoteEntailment : public EntailmentScorer {
 public:
  explicit RemoteEntailment(RemoteEntailmentConfig config);

  EntailmentTriple entail(std::string_view premise,
                          std::string_view hypothesis) const override;
  std::vector<EntailmentTriple> entail_batch(
      std::span<const EntailPair> pairs) const override;

 private:
  nlohmann::json post(const std::string &path, const nlohmann::json &body) const;

  RemoteEntailmentConfig config_;
  std::string scheme_host_port_;
  std::string base_path_;
  mutable std::counting_semaphore<> in_flight_;
};

// Uses `fallback` whenever `primary` reports kUnavailable.
class FallbackEntailment : public EntailmentScorer {
 public:
  FallbackEntailment(std::shared_ptr<const EntailmentScorer> primary,
                     std::shared_ptr<const EntailmentScorer> fallback)
      : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

  EntailmentTriple entail(std::string_view premise,
                          std::string_view hypothesis) const override;
  std::vector<EntailmentTriple> entail_batch(
      std::span<const EntailPair> pairs) const override;

 private:
  std::shared_ptr<const EntailmentScorer> primary_;
  std::shared_ptr<const EntailmentScorer> fallback_;
};

}  // namespace rulebridge

#endif  // RULEBRIDGE_SCORING_H_
