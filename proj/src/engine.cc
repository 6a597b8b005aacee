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

#include "rulebridge/engine.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace rulebridge {

namespace {

namespace pt = boost::property_tree;

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

double to_double(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    double d = std::stod(value, &used);
    if (used == value.size()) return d;
  } catch (const std::exception &) {
  }
  throw Error(ErrorKind::kParse, "config " + key + ": not a number: '" + value + "'");
}

long to_long(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception &) {
  }
  throw Error(ErrorKind::kParse, "config " + key + ": not an integer: '" + value + "'");
}

bool to_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorKind::kParse, "config " + key + ": not a boolean: '" + value + "'");
}

std::string env_name(const std::string &key) {
  std::string out = "RULEBRIDGE_";
  for (char c : key) {
    if (c == '.')
      out.push_back('_');
    else
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::optional<std::string> process_env(const std::string &name) {
  const char *v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = {
      "corpus.catalog",          "corpus.recipes",
      "corpus.recipes_format",   "corpus.delimiter",
      "corpus.trigger_column",   "corpus.action_column",
      "corpus.ontology",         "corpus.ontology_format",
      "corpus.split_camel_case", "corpus.trigger_root",
      "corpus.action_root",      "corpus.vectors",
      "pipeline.threshold",      "pipeline.top_n",
      "pipeline.method",         "pipeline.workers",
      "entailment.backend",      "entailment.endpoint",
      "entailment.fallback",     "entailment.max_in_flight",
      "entailment.retries",      "entailment.timeout_ms",
      "store.path",              "store.results",
      "service.host",            "service.port",
      "service.token",           "service.ui_dir",
      "remote.url",              "remote.token",
      "remote.timeout_ms",
  };
  return keys;
}

OntologyFormat guess_ontology_format(const std::filesystem::path &path) {
  std::string ext = path.extension().string();
  return ext == ".json" ? OntologyFormat::kPreparedJson : OntologyFormat::kOntologyXml;
}

void set_config_value(EngineConfig *c, const std::string &key, const std::string &value,
                      const std::filesystem::path &base) {
  if (key == "corpus.catalog") {
    c->catalog = resolve(base, value);
  } else if (key == "corpus.recipes") {
    c->recipes = resolve(base, value);
  } else if (key == "corpus.recipes_format") {
    if (value == "csv" || value == "delimited")
      c->recipe_format.format = RecipeFormat::kDelimited;
    else if (value == "jsonl")
      c->recipe_format.format = RecipeFormat::kJsonLines;
    else
      throw Error(ErrorKind::kParse, "config " + key + ": expected csv or jsonl");
  } else if (key == "corpus.delimiter") {
    if (value == "tab" || value == "\\t")
      c->recipe_format.delimiter = '\t';
    else if (value.size() == 1)
      c->recipe_format.delimiter = value[0];
    else
      throw Error(ErrorKind::kParse, "config " + key + ": expected one character");
  } else if (key == "corpus.trigger_column") {
    c->recipe_format.trigger_column = value;
  } else if (key == "corpus.action_column") {
    c->recipe_format.action_column = value;
  } else if (key == "corpus.ontology") {
    c->ontology = resolve(base, value);
    c->ontology_format = guess_ontology_format(c->ontology);
  } else if (key == "corpus.ontology_format") {
    if (value == "xml")
      c->ontology_format = OntologyFormat::kOntologyXml;
    else if (value == "json")
      c->ontology_format = OntologyFormat::kPreparedJson;
    else
      throw Error(ErrorKind::kParse, "config " + key + ": expected xml or json");
  } else if (key == "corpus.split_camel_case") {
    c->ontology_config.split_camel_case = to_bool(key, value);
  } else if (key == "corpus.trigger_root") {
    c->ontology_config.trigger_root = value;
  } else if (key == "corpus.action_root") {
    c->ontology_config.action_root = value;
  } else if (key == "corpus.vectors") {
    c->vectors = resolve(base, value);
  } else if (key == "pipeline.threshold") {
    c->pipeline.threshold = to_double(key, value);
  } else if (key == "pipeline.top_n") {
    long n = to_long(key, value);
    if (n < 1) throw Error(ErrorKind::kParse, "config " + key + ": must be >= 1");
    c->pipeline.top_n = static_cast<std::size_t>(n);
  } else if (key == "pipeline.method") {
    auto m = parse_method(value);
    if (!m) throw Error(ErrorKind::kParse, "config " + key + ": unknown method");
    c->pipeline.method = *m;
  } else if (key == "pipeline.workers") {
    c->workers = static_cast<std::size_t>(std::max(1L, to_long(key, value)));
  } else if (key == "entailment.backend") {
    auto b = parse_entailment_backend(value);
    if (!b) throw Error(ErrorKind::kParse, "config " + key + ": expected proxy or remote");
    c->pipeline.entailment_backend = *b;
  } else if (key == "entailment.endpoint") {
    c->remote_entailment.endpoint = value;
  } else if (key == "entailment.fallback") {
    c->entailment_fallback = to_bool(key, value);
  } else if (key == "entailment.max_in_flight") {
    c->remote_entailment.max_in_flight = static_cast<int>(to_long(key, value));
  } else if (key == "entailment.retries") {
    c->remote_entailment.retries = static_cast<int>(to_long(key, value));
  } else if (key == "entailment.timeout_ms") {
    c->remote_entailment.timeout = std::chrono::milliseconds(to_long(key, value));
  } else if (key == "store.path") {
    c->store = resolve(base, value);
  } else if (key == "store.results") {
    c->results = resolve(base, value);
  } else if (key == "service.host") {
    c->host = value;
  } else if (key == "service.port") {
    c->port = static_cast<int>(to_long(key, value));
  } else if (key == "service.token") {
    c->token = value;
  } else if (key == "service.ui_dir") {
    c->ui_dir = resolve(base, value);
  } else if (key == "remote.url") {
    c->container.url = value;
  } else if (key == "remote.token") {
    c->container.token = value;
  } else if (key == "remote.timeout_ms") {
    c->container.timeout = std::chrono::milliseconds(to_long(key, value));
  } else {
    throw Error(ErrorKind::kParse, "unknown config key '" + key + "'");
  }
}

EngineConfig load_config(const std::filesystem::path &path, const EnvLookup &env) {
  EngineConfig config;
  std::filesystem::path base;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "missing file: " + path.string());
    pt::ptree tree;
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
      throw Error(ErrorKind::kParse, std::string("bad config: ") + e.what());
    }
    base = path.parent_path();
    for (const auto &[section, entries] : tree) {
      if (entries.empty()) {
        throw Error(ErrorKind::kParse, "config key '" + section + "' outside a section");
      }
      for (const auto &[key, value] : entries)
        set_config_value(&config, section + "." + key, value.data(), base);
    }
  }
  if (env) {
    for (const auto &key : config_keys())
      if (auto v = env(env_name(key))) set_config_value(&config, key, *v, {});
  }
  config.pipeline.validate();
  return config;
}

std::shared_ptr<const EntailmentScorer> make_entailment_scorer(const EngineConfig &config) {
  auto proxy = std::make_shared<ProxyEntailment>();
  if (config.pipeline.entailment_backend == EntailmentBackend::kProxy) return proxy;
  auto remote = std::make_shared<RemoteEntailment>(config.remote_entailment);
  if (!config.entailment_fallback) return remote;
  return std::make_shared<FallbackEntailment>(remote, proxy);
}

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
  config_.pipeline.validate();
  if (!config_.catalog.empty()) {
    catalog_ = catalog_from_json(load_json(config_.catalog));
  } else if (!config_.recipes.empty()) {
    catalog_ = clean_and_split(load_recipes(config_.recipes, config_.recipe_format)).catalog;
  }
  if (config_.ontology.empty())
    throw Error(ErrorKind::kInvalidInput, "no ontology configured (corpus.ontology)");
  ontology_ = load_ontology(config_.ontology, config_.ontology_format,
                            config_.ontology_config);
  if (!config_.vectors.empty()) {
    vectors_ = std::make_shared<VectorStore>(VectorStore::load(config_.vectors));
    similarity_ = std::make_shared<VectorSimilarity>(*vectors_);
  }
  entailment_ = make_entailment_scorer(config_);
  store_ = std::make_unique<RuleStore>(config_.store);
  load_results();
}

Engine::Engine(EngineConfig config, ProprietaryCatalog catalog, OntologyCatalog ontology,
               std::shared_ptr<const SimilarityScorer> similarity,
               std::shared_ptr<const EntailmentScorer> entailment,
               std::unique_ptr<RuleStore> store)
    : config_(std::move(config)),
      catalog_(std::move(catalog)),
      ontology_(std::move(ontology)),
      similarity_(std::move(similarity)),
      entailment_(std::move(entailment)),
      store_(std::move(store)) {
  config_.pipeline.validate();
  if (!store_) store_ = std::make_unique<RuleStore>();
  load_results();
}

void Engine::load_results() {
  if (config_.results.empty() || !std::filesystem::exists(config_.results)) return;
  std::ifstream in(config_.results);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(line, nullptr, false);
    if (doc.is_discarded())
      throw Error(ErrorKind::kParse, "corrupt results file " + config_.results.string());
    results_.push_back(std::move(doc));
  }
}

TranslationResult Engine::translate(std::string_view name, TermKind kind, Method method,
                                    bool apply_reviews) const {
  std::string cleaned = clean_name(name);
  if (cleaned.empty())
    throw Error(ErrorKind::kInvalidInput, "name is empty after cleaning");
  PipelineConfig cfg = config_.pipeline;
  cfg.method = method;
  TranslationResult result = rulebridge::translate(cleaned, kind, ontology_, cfg, scorers());
  if (apply_reviews) result = apply_review_overrides(std::move(result), store_->review_lookup());
  return result;
}

BatchOutput Engine::translate_all(Method method) const {
  PipelineConfig cfg = config_.pipeline;
  cfg.method = method;
  return translate_batch(catalog_, ontology_, cfg, scorers(), config_.workers);
}

CorpusSummary Engine::summary() const {
  return {catalog_.triggers.size(), catalog_.actions.size(), ontology_.triggers.size(),
          ontology_.actions.size(), vectors_ ? vectors_->size() : 0};
}

}  // namespace rulebridge
