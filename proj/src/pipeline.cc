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

#include "rulebridge/pipeline.h"

#include <algorithm>
#include <atomic>
#include <thread>

namespace rulebridge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::vector<OntologyTerm> &require_terms(const OntologyCatalog &ontology,
                                               TermKind kind) {
  const auto &terms = ontology.terms(kind);
  if (terms.empty())
    throw Error(ErrorKind::kInvalidInput,
                "ontology has no " + std::string(to_string(kind)) + " terms");
  return terms;
}

TranslationResult empty_result(std::string_view source, TermKind kind,
                               Method method) {
  TranslationResult r;
  r.source_name = std::string(source);
  r.kind = kind;
  r.method = method;
  return r;
}

ScoredCandidate make_candidate(std::string_view source, TermKind kind,
                               const std::string &name) {
  ScoredCandidate c;
  c.source_name = std::string(source);
  c.kind = kind;
  c.candidate_name = name;
  return c;
}

void rank(TranslationResult *result) {
  Method method = result->method;
  std::sort(result->candidates.begin(), result->candidates.end(),
            [method](const ScoredCandidate &a, const ScoredCandidate &b) {
              double ka = sort_key(a, method), kb = sort_key(b, method);
              if (ka != kb) return ka > kb;
              return a.candidate_name < b.candidate_name;
            });
  for (std::size_t i = 0; i < result->candidates.size(); ++i)
    result->candidates[i].rank = i + 1;
  result->no_result = result->candidates.empty();
}

void set_embedding(ScoredCandidate *c, double value) {
  c->embedding = value;
  c->embedding_pct = 100.0 * value;
}

// Candidates whose name yields no tokens cannot serve as a hypothesis.
std::vector<const OntologyTerm *> entailable(const std::vector<OntologyTerm> &terms) {
  std::vector<const OntologyTerm *> out;
  for (const auto &t : terms)
    if (!tokenize(t.name).empty()) out.push_back(&t);
  return out;
}

std::vector<EntailmentTriple> score_entailment(
    std::string_view source, const std::vector<std::string> &hypotheses,
    const EntailmentScorer &scorer) {
  std::vector<EntailPair> pairs;
  pairs.reserve(hypotheses.size());
  for (const auto &h : hypotheses) pairs.push_back({std::string(source), h});
  std::vector<EntailmentTriple> triples = scorer.entail_batch(pairs);
  if (triples.size() != pairs.size())
    throw Error(ErrorKind::kUnavailable, "entailment scorer returned " +
                                             std::to_string(triples.size()) +
                                             " triples for " +
                                             std::to_string(pairs.size()) + " pairs");
  return triples;
}

}  // namespace

std::string_view to_string(EntailmentBackend backend) {
  return backend == EntailmentBackend::kProxy ? "proxy" : "remote";
}

std::optional<EntailmentBackend> parse_entailment_backend(std::string_view text) {
  if (text == "proxy") return EntailmentBackend::kProxy;
  if (text == "remote") return EntailmentBackend::kRemote;
  return std::nullopt;
}

void PipelineConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorKind::kInvalidInput, "threshold must lie in [0, 1]");
  if (top_n < 1) throw Error(ErrorKind::kInvalidInput, "top_n must be at least 1");
}

std::span<const ScoredCandidate> TranslationResult::top(std::size_t n) const {
  std::span<const ScoredCandidate> all(candidates);
  return n == 0 || n >= all.size() ? all : all.first(n);
}

double sort_key(const ScoredCandidate &c, Method method) {
  switch (method) {
    case Method::kEmbedding:
      return c.embedding.value_or(0.0);
    case Method::kEntailment:
      return c.entailment ? c.entailment->entailment : 0.0;
    case Method::kCombined:
      return c.combined_pct.value_or(0.0);
  }
  return 0.0;
}

TranslationResult translate_embedding(std::string_view source, TermKind kind,
                                      const OntologyCatalog &ontology,
                                      const PipelineConfig &config,
                                      const SimilarityScorer &similarity) {
  config.validate();
  const auto &terms = require_terms(ontology, kind);
  TranslationResult result = empty_result(source, kind, Method::kEmbedding);
  if (!similarity.covers(source)) {
    result.diagnostic = "source has no in-vocabulary tokens";
    return result;
  }
  for (const auto &term : terms) {
    EmbeddingScore s = similarity.score(source, term.name);
    if (s.value < config.threshold) continue;
    ScoredCandidate c = make_candidate(source, kind, term.name);
    set_embedding(&c, s.value);
    result.candidates.push_back(std::move(c));
  }
  rank(&result);
  return result;
}

TranslationResult translate_entailment(std::string_view source, TermKind kind,
                                       const OntologyCatalog &ontology,
                                       const PipelineConfig &config,
                                       const EntailmentScorer &entailment) {
  config.validate();
  const auto &terms = require_terms(ontology, kind);
  TranslationResult result = empty_result(source, kind, Method::kEntailment);
  std::vector<const OntologyTerm *> usable = entailable(terms);
  std::vector<std::string> hypotheses;
  for (const auto *t : usable) hypotheses.push_back(t->name);
  std::vector<EntailmentTriple> triples = score_entailment(source, hypotheses, entailment);
  for (std::size_t i = 0; i < usable.size(); ++i) {
    ScoredCandidate c = make_candidate(source, kind, usable[i]->name);
    c.entailment = triples[i];
    result.candidates.push_back(std::move(c));
  }
  rank(&result);
  return result;
}

TranslationResult translate_combined(std::string_view source, TermKind kind,
                                     const OntologyCatalog &ontology,
                                     const PipelineConfig &config,
                                     const SimilarityScorer &similarity,
                                     const EntailmentScorer &entailment) {
  TranslationResult preliminary =
      translate_embedding(source, kind, ontology, config, similarity);
  TranslationResult result = empty_result(source, kind, Method::kCombined);
  result.diagnostic = preliminary.diagnostic;

  std::vector<ScoredCandidate> pool;
  std::vector<std::string> hypotheses;
  for (auto &c : preliminary.candidates) {
    if (tokenize(c.candidate_name).empty()) continue;
    hypotheses.push_back(c.candidate_name);
    pool.push_back(std::move(c));
  }
  std::vector<EntailmentTriple> triples = score_entailment(source, hypotheses, entailment);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    ScoredCandidate &c = pool[i];
    c.entailment = triples[i];
    c.combined_pct = (*c.embedding_pct + triples[i].entailment) / 2.0;
    result.candidates.push_back(std::move(c));
  }
  rank(&result);
  return result;
}

TranslationResult translate(std::string_view source, TermKind kind,
                            const OntologyCatalog &ontology,
                            const PipelineConfig &config, const Scorers &scorers) {
  auto need_similarity = [&]() -> const SimilarityScorer & {
    if (!scorers.similarity)
      throw Error(ErrorKind::kInvalidInput, "no similarity scorer configured");
    return *scorers.similarity;
  };
  auto need_entailment = [&]() -> const EntailmentScorer & {
    if (!scorers.entailment)
      throw Error(ErrorKind::kInvalidInput, "no entailment scorer configured");
    return *scorers.entailment;
  };
  switch (config.method) {
    case Method::kEmbedding:
      return translate_embedding(source, kind, ontology, config, need_similarity());
    case Method::kEntailment:
      return translate_entailment(source, kind, ontology, config, need_entailment());
    case Method::kCombined:
      return translate_combined(source, kind, ontology, config, need_similarity(),
                                need_entailment());
  }
  throw Error(ErrorKind::kInvalidInput, "unknown method");
}

BatchOutput translate_batch(const ProprietaryCatalog &catalog,
                            const OntologyCatalog &ontology,
                            const PipelineConfig &config, const Scorers &scorers,
                            std::size_t workers) {
  config.validate();
  std::vector<const CatalogTerm *> terms;
  for (const auto &t : catalog.triggers) terms.push_back(&t);
  for (const auto &t : catalog.actions) terms.push_back(&t);

  std::vector<TranslationResult> results(terms.size());
  std::vector<std::optional<std::string>> failures(terms.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < terms.size(); i = next++) {
      const CatalogTerm &term = *terms[i];
      try {
        results[i] = translate(term.name, term.kind, ontology, config, scorers);
      } catch (const std::exception &e) {
        results[i] = empty_result(term.name, term.kind, config.method);
        results[i].diagnostic = e.what();
        failures[i] = e.what();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, terms.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  BatchOutput out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (failures[i]) out.errors.push_back({terms[i]->name, terms[i]->kind, *failures[i]});
  out.results = std::move(results);
  return out;
}

TranslationResult apply_review_overrides(TranslationResult result,
                                         const ReviewLookup &reviews) {
  if (!reviews) return result;
  std::optional<ReviewRecord> review = reviews(result.source_name, result.kind);
  if (!review) return result;

  if (review->none_suitable()) {
    for (auto &c : result.candidates) result.advisory.push_back(std::move(c));
    result.candidates.clear();
    result.no_result = true;
    return result;
  }

  const std::string &chosen = *review->chosen;
  auto it = std::find_if(result.candidates.begin(), result.candidates.end(),
                         [&](const ScoredCandidate &c) { return c.candidate_name == chosen; });
  ScoredCandidate pinned;
  if (it != result.candidates.end()) {
    pinned = std::move(*it);
    result.candidates.erase(it);
  } else {
    pinned = make_candidate(result.source_name, result.kind, chosen);
  }
  pinned.pinned_by_review = true;
  result.candidates.insert(result.candidates.begin(), std::move(pinned));
  for (std::size_t i = 0; i < result.candidates.size(); ++i)
    result.candidates[i].rank = i + 1;
  result.no_result = false;
  return result;
}

ordered_json candidate_record(const ScoredCandidate &c) {
  ordered_json out;
  out["ifttt_name"] = c.source_name;
  out["eupont_hypothesis"] = c.candidate_name;
  if (c.embedding_pct) out["spacy_similarity"] = *c.embedding_pct;
  if (c.entailment) {
    out["allen_nlp_entailment"] = c.entailment->entailment;
    out["allen_nlp_contradiction"] = c.entailment->contradiction;
    out["allen_nlp_neutral"] = c.entailment->neutral;
  }
  if (c.combined_pct) out["combined_similarity"] = *c.combined_pct;
  out["rank"] = c.rank;
  if (c.pinned_by_review) out["pinned_by_review"] = true;
  return out;
}

ScoredCandidate candidate_from_json(const json &r) {
  ScoredCandidate c;
  c.source_name = r.at("ifttt_name").get<std::string>();
  c.candidate_name = r.at("eupont_hypothesis").get<std::string>();
  if (r.contains("kind"))
    c.kind = parse_term_kind(r["kind"].get<std::string>()).value_or(TermKind::kTrigger);
  if (r.contains("spacy_similarity")) {
    c.embedding_pct = r["spacy_similarity"].get<double>();
    c.embedding = *c.embedding_pct / 100.0;
  }
  if (r.contains("allen_nlp_entailment"))
    c.entailment = EntailmentTriple{r.at("allen_nlp_entailment").get<double>(),
                                    r.at("allen_nlp_contradiction").get<double>(),
                                    r.at("allen_nlp_neutral").get<double>()};
  if (r.contains("combined_similarity"))
    c.combined_pct = r["combined_similarity"].get<double>();
  c.rank = r.value("rank", std::size_t{0});
  c.pinned_by_review = r.value("pinned_by_review", false);
  return c;
}

ordered_json to_json(const TranslationResult &result, std::size_t limit) {
  ordered_json out;
  out["ifttt_name"] = result.source_name;
  out["kind"] = to_string(result.kind);
  out["method"] = to_string(result.method);
  out["no_result"] = result.no_result;
  if (!result.diagnostic.empty()) out["diagnostic"] = result.diagnostic;
  ordered_json list = ordered_json::array();
  for (const auto &c : result.top(limit)) list.push_back(candidate_record(c));
  out["candidates"] = std::move(list);
  if (!result.advisory.empty()) {
    ordered_json advisory = ordered_json::array();
    for (const auto &c : result.advisory) advisory.push_back(candidate_record(c));
    out["advisory_candidates"] = std::move(advisory);
  }
  return out;
}

TranslationResult result_from_json(const json &doc) {
  TranslationResult r;
  r.source_name = doc.at("ifttt_name").get<std::string>();
  auto kind = parse_term_kind(doc.at("kind").get<std::string>());
  auto method = parse_method(doc.at("method").get<std::string>());
  if (!kind || !method) throw Error(ErrorKind::kParse, "bad kind or method in result");
  r.kind = *kind;
  r.method = *method;
  r.diagnostic = doc.value("diagnostic", "");
  auto read = [&](const char *key, std::vector<ScoredCandidate> *list) {
    if (!doc.contains(key)) return;
    for (const auto &item : doc[key]) {
      ScoredCandidate c = candidate_from_json(item);
      c.kind = r.kind;
      list->push_back(std::move(c));
    }
  };
  read("candidates", &r.candidates);
  read("advisory_candidates", &r.advisory);
  r.no_result = doc.value("no_result", r.candidates.empty());
  return r;
}

std::string canonical_jsonl(std::span<const TranslationResult> results,
                            std::size_t limit) {
  std::string out;
  for (const auto &r : results) {
    out += to_json(r, limit).dump();
    out += '\n';
  }
  return out;
}

ordered_json paper_compat(const TranslationResult &result, std::size_t limit) {
  ordered_json list = ordered_json::array();
  for (const auto &c : result.top(limit)) {
    if (result.method == Method::kEmbedding) {
      ordered_json inner;
      inner["ifttt_name"] = c.source_name;
      inner["similarity"] = c.embedding.value_or(0.0);
      ordered_json entry;
      entry[c.candidate_name] = std::move(inner);
      list.push_back(std::move(entry));
      continue;
    }
    ordered_json rec;
    rec["ifttt_name"] = c.source_name;
    rec["eupont_hypothesis"] = c.candidate_name;
    if (result.method == Method::kCombined && c.embedding_pct)
      rec["spacy_similarity"] = *c.embedding_pct;
    if (c.entailment) {
      rec["allen_nlp_entailment"] = c.entailment->entailment;
      rec["allen_nlp_contradiction"] = c.entailment->contradiction;
      rec["allen_nlp_neutral"] = c.entailment->neutral;
    }
    if (result.method == Method::kCombined && c.combined_pct)
      rec["combined_similarity"] = *c.combined_pct;
    list.push_back(std::move(rec));
  }
  if (result.method == Method::kEntailment) {
    ordered_json outer = ordered_json::array();
    outer.push_back(std::move(list));
    return outer;
  }
  return list;
}

}  // namespace rulebridge
