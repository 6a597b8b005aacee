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

// Configuration and the loaded engine shared by the CLI and the HTTP service.
//
// Configuration is an INI file addressed by dotted paths ("pipeline.threshold")
// with environment overrides named RULEBRIDGE_<SECTION>_<KEY>, e.g.
// RULEBRIDGE_PIPELINE_THRESHOLD. Relative paths resolve against the directory
// of the config file.

#ifndef RULEBRIDGE_ENGINE_H_
#define RULEBRIDGE_ENGINE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rulebridge/catalog.h"
#include "rulebridge/embedvec.h"
#include "rulebridge/pipeline.h"
#include "rulebridge/rulestore.h"
#include "rulebridge/scoring.h"

namespace rulebridge {

struct EngineConfig {
  // Proprietary corpus: either a prepared catalog or a raw recipe file.
  std::filesystem::path catalog;
  std::filesystem::path recipes;
  RecipeFormatConfig recipe_format;

  std::filesystem::path ontology;
  OntologyFormat ontology_format = OntologyFormat::kOntologyXml;
  OntologyConfig ontology_config;

  std::filesystem::path vectors;

  PipelineConfig pipeline;
  RemoteEntailmentConfig remote_entailment;
  bool entailment_fallback = true;  // use the proxy when the remote is down

  std::filesystem::path store;
  std::filesystem::path results;  // persisted batch results (JSON lines)

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string token;  // shared bearer token for /api, empty = open
  std::filesystem::path ui_dir;

  ContainerConfig container;
  std::size_t workers = 1;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string &name)>;

std::optional<std::string> process_env(const std::string &name);

// Every recognised dotted key, e.g. "pipeline.threshold".
const std::vector<std::string> &config_keys();

// Reads `path` (may be empty for defaults) and applies environment
// overrides. Throws kParse on unknown keys or malformed values.
EngineConfig load_config(const std::filesystem::path &path,
                         const EnvLookup &env = process_env);
// Applies one dotted key; `base` resolves relative paths.
void set_config_value(EngineConfig *config, const std::string &key,
                      const std::string &value, const std::filesystem::path &base);

OntologyFormat guess_ontology_format(const std::filesystem::path &path);

struct CorpusSummary {
  std::size_t triggers = 0;
  std::size_t actions = 0;
  std::size_t ontology_triggers = 0;
  std::size_t ontology_actions = 0;
  std::size_t vectors = 0;
};

// Loaded corpora, scorers and store. Corpora are immutable after
// construction; translation is safe to call concurrently.
class Engine {
 public:
  // Loads everything named by the config. Throws on any load failure.
  explicit Engine(EngineConfig config);

  // For tests and embedding: supply the corpora directly. `store` may be
  // null, in which case an in-memory store is created.
  Engine(EngineConfig config, ProprietaryCatalog catalog, OntologyCatalog ontology,
         std::shared_ptr<const SimilarityScorer> similarity,
         std::shared_ptr<const EntailmentScorer> entailment,
         std::unique_ptr<RuleStore> store = nullptr);

  // `name` is cleaned like catalog names before scoring.
  TranslationResult translate(std::string_view name, TermKind kind, Method method,
                              bool apply_reviews = true) const;
  BatchOutput translate_all(Method method) const;

  const EngineConfig &config() const { return config_; }
  const ProprietaryCatalog &catalog() const { return catalog_; }
  const OntologyCatalog &ontology() const { return ontology_; }
  RuleStore &store() { return *store_; }
  const RuleStore &store() const { return *store_; }
  Scorers scorers() const { return {similarity_.get(), entailment_.get()}; }
  CorpusSummary summary() const;

  // Persisted batch results keyed by (name, kind), all methods.
  const std::vector<nlohmann::ordered_json> &persisted_results() const { return results_; }

 private:
  void load_results();

  EngineConfig config_;
  ProprietaryCatalog catalog_;
  OntologyCatalog ontology_;
  std::shared_ptr<const VectorStore> vectors_;
  std::shared_ptr<const SimilarityScorer> similarity_;
  std::shared_ptr<const EntailmentScorer> entailment_;
  std::unique_ptr<RuleStore> store_;
  std::vector<nlohmann::ordered_json> results_;
};

std::shared_ptr<const EntailmentScorer> make_entailment_scorer(const EngineConfig &config);

}  // namespace rulebridge

#endif  // RULEBRIDGE_ENGINE_H_
