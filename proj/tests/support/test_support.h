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

// Shared helpers for unit and acceptance tests: fixture loading, scripted
// scorers, temp directories and in-process fake HTTP peers.

#ifndef RULEBRIDGE_TESTS_SUPPORT_TEST_SUPPORT_H_
#define RULEBRIDGE_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "rulebridge/catalog.h"
#include "rulebridge/embedvec.h"
#include "rulebridge/pipeline.h"
#include "rulebridge/rulestore.h"
#include "rulebridge/scoring.h"

namespace rbtest {

namespace rb = rulebridge;

inline std::filesystem::path source_dir() { return RULEBRIDGE_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string &name) {
  return source_dir() / "data" / "fixtures" / name;
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct Corpus {
  rb::RawRecipeSet raw;
  rb::PreparedCatalog prepared;
  rb::OntologyCatalog ontology;
  rb::VectorStore vectors{1};
};

// Loaded once per process; read-only afterwards.
inline const Corpus &corpus() {
  static const Corpus c = [] {
    Corpus out;
    out.raw = rb::load_recipes(fixture("recipes.csv"), {});
    out.prepared = rb::clean_and_split(out.raw);
    out.ontology = rb::load_ontology(fixture("ontology.owl"), rb::OntologyFormat::kOntologyXml);
    out.vectors = rb::VectorStore::load(fixture("vectors.txt"));
    return out;
  }();
  return c;
}

// Similarity looked up by (source, candidate); `fallback` otherwise.
class ScriptedSimilarity : public rb::SimilarityScorer {
 public:
  explicit ScriptedSimilarity(double fallback = 0.0) : fallback_(fallback) {}
  void set(const std::string &source, const std::string &candidate, double value) {
    table_[{source, candidate}] = value;
  }
  rb::EmbeddingScore score(std::string_view source,
                           std::string_view candidate) const override {
    auto it = table_.find({std::string(source), std::string(candidate)});
    return {it == table_.end() ? fallback_ : it->second, false};
  }

 private:
  double fallback_;
  std::map<std::pair<std::string, std::string>, double> table_;
};

class ScriptedEntailment : public rb::EntailmentScorer {
 public:
  explicit ScriptedEntailment(rb::EntailmentTriple fallback = {0.0, 10.0, 90.0})
      : fallback_(fallback) {}
  void set(const std::string &premise, const std::string &hypothesis,
           rb::EntailmentTriple triple) {
    table_[{premise, hypothesis}] = triple;
  }
  rb::EntailmentTriple entail(std::string_view premise,
                              std::string_view hypothesis) const override {
    auto it = table_.find({std::string(premise), std::string(hypothesis)});
    return it == table_.end() ? fallback_ : it->second;
  }

 private:
  rb::EntailmentTriple fallback_;
  std::map<std::pair<std::string, std::string>, rb::EntailmentTriple> table_;
};

inline rb::OntologyCatalog ontology_of(std::vector<std::string> triggers,
                                       std::vector<std::string> actions = {"Send Message"}) {
  rb::OntologyCatalog out;
  for (auto &t : triggers) out.triggers.push_back({t, rb::TermKind::kTrigger, t});
  for (auto &a : actions) out.actions.push_back({a, rb::TermKind::kAction, a});
  return out;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rulebridge-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Runs an httplib server on an ephemeral loopback port until destroyed.
class ServerThread {
 public:
  ServerThread() = default;
  ~ServerThread() { stop(); }

  httplib::Server &server() { return server_; }

  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }
  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

// Remote document container: GET /pod/rules, GET/PUT /pod/rules/{id}.
class FakeContainer {
 public:
  explicit FakeContainer(std::string token = "secret") : token_(std::move(token)) {
    auto &s = srv_.server();
    s.Get("/pod/rules", [this](const httplib::Request &req, httplib::Response &res) {
      if (!authorized(req, res)) return;
      std::lock_guard lock(mu_);
      nlohmann::json manifest = nlohmann::json::object();
      for (const auto &[id, doc] : docs_) manifest[id] = doc.value("revision", 0);
      res.set_content(manifest.dump(), "application/json");
    });
    s.Get("/pod/rules/(.+)", [this](const httplib::Request &req, httplib::Response &res) {
      if (!authorized(req, res)) return;
      std::lock_guard lock(mu_);
      ++gets_;
      auto it = docs_.find(req.matches[1].str());
      if (it == docs_.end()) {
        res.status = 404;
        return;
      }
      res.set_content(it->second.dump(), "application/json");
    });
    s.Put("/pod/rules/(.+)", [this](const httplib::Request &req, httplib::Response &res) {
      if (!authorized(req, res)) return;
      std::lock_guard lock(mu_);
      ++puts_;
      docs_[req.matches[1].str()] = nlohmann::json::parse(req.body);
      res.status = 204;
    });
    srv_.start();
  }

  std::string url() const { return srv_.url() + "/pod"; }
  rb::ContainerConfig config() const { return {url(), token_, std::chrono::seconds(5)}; }

  void put(const rb::TranslatedRuleDoc &doc) {
    std::lock_guard lock(mu_);
    docs_[doc.id] = rb::to_json(doc);
  }
  std::optional<rb::TranslatedRuleDoc> get(const std::string &id) {
    std::lock_guard lock(mu_);
    auto it = docs_.find(id);
    if (it == docs_.end()) return std::nullopt;
    return rb::rule_from_json(it->second);
  }
  int puts() const { return puts_; }
  int gets() const { return gets_; }

 private:
  bool authorized(const httplib::Request &req, httplib::Response &res) {
    if (req.get_header_value("Authorization") == "Bearer " + token_) return true;
    res.status = 401;
    return false;
  }

  std::string token_;
  std::mutex mu_;
  std::map<std::string, nlohmann::json> docs_;
  std::atomic<int> puts_{0};
  std::atomic<int> gets_{0};
  ServerThread srv_;
};

// Entailment model server speaking the /entail wire protocol. The behaviour
// can be switched between a well-formed scorer and several failure modes.
class FakeEntailmentServer {
 public:
  enum class Mode { kProxy, kFixed, kServerError, kMalformed };

  FakeEntailmentServer() {
    auto &s = srv_.server();
    s.Post("/entail", [this](const httplib::Request &req, httplib::Response &res) {
      ++single_;
      auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || body.value("premise", "").empty() ||
          body.value("hypothesis", "").empty()) {
        res.status = 400;
        return;
      }
      reply(body, res);
    });
    s.Post("/entail/batch", [this](const httplib::Request &req, httplib::Response &res) {
      ++batch_;
      auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_array()) {
        res.status = 400;
        return;
      }
      if (mode_ == Mode::kServerError) {
        res.status = 500;
        return;
      }
      if (mode_ == Mode::kMalformed) {
        res.set_content("[{\"entailment\": ", "application/json");
        return;
      }
      nlohmann::json out = nlohmann::json::array();
      for (const auto &pair : body) out.push_back(triple_for(pair));
      res.set_content(out.dump(), "application/json");
    });
    srv_.start();
  }

  std::string url() const { return srv_.url(); }
  void set_mode(Mode mode) { mode_ = mode; }
  void set_fixed(rb::EntailmentTriple t) { fixed_ = t; }
  int single_calls() const { return single_; }
  int batch_calls() const { return batch_; }

 private:
  nlohmann::json triple_for(const nlohmann::json &pair) const {
    if (mode_ == Mode::kFixed) return rb::to_json(fixed_);
    return rb::to_json(rb::proxy_entailment(pair.value("premise", ""),
                                            pair.value("hypothesis", "")));
  }
  void reply(const nlohmann::json &pair, httplib::Response &res) {
    if (mode_ == Mode::kServerError) {
      res.status = 500;
      return;
    }
    if (mode_ == Mode::kMalformed) {
      res.set_content("not json", "application/json");
      return;
    }
    res.set_content(triple_for(pair).dump(), "application/json");
  }

  std::atomic<Mode> mode_{Mode::kProxy};
  rb::EntailmentTriple fixed_;
  std::atomic<int> single_{0};
  std::atomic<int> batch_{0};
  ServerThread srv_;
};

inline rb::TranslatedRuleDoc sample_rule(const std::string &id) {
  rb::TranslatedRuleDoc doc;
  doc.id = id;
  doc.source_platform = "ifttt";
  doc.original_trigger = "AC turned off";
  doc.original_action = "Send message";
  doc.translated_trigger = "Device Turned Off";
  doc.translated_action = "Send Message";
  doc.method = rb::Method::kCombined;
  rb::ScoredCandidate c;
  c.source_name = "AC turned off";
  c.kind = rb::TermKind::kTrigger;
  c.candidate_name = "Device Turned Off";
  c.embedding = 0.9493566064369595;
  c.embedding_pct = 100.0 * *c.embedding;
  c.entailment = rb::EntailmentTriple{66.66666666666667, 3.3333333333333335, 30.0};
  c.combined_pct = (*c.embedding_pct + c.entailment->entailment) / 2.0;
  c.rank = 1;
  doc.trigger_scores.push_back(c);
  return doc;
}

}  // namespace rbtest

#endif  // RULEBRIDGE_TESTS_SUPPORT_TEST_SUPPORT_H_
