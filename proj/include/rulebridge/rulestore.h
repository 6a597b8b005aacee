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

// Persistence for translated rules and review decisions.
//
// The local store is a single append-only log of JSON lines replayed into an
// in-memory index on open; compact() rewrites it with only live records.
// Writers are serialized, readers see committed state only.
//
// sync_remote() reconciles the local store with a remote document container
// (GET /rules manifest, GET/PUT /rules/{id}) using last-writer-wins on the
// revision, then on updated_at.

#ifndef RULEBRIDGE_RULESTORE_H_
#define RULEBRIDGE_RULESTORE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rulebridge/pipeline.h"
#include "rulebridge/review.h"

namespace rulebridge {

struct TranslatedRuleDoc {
  std::string id;
  std::string source_platform;
  std::string original_trigger;
  std::string original_action;
  std::optional<std::string> translated_trigger;
  std::optional<std::string> translated_action;
  Method method = Method::kCombined;
  std::vector<ScoredCandidate> trigger_scores;
  std::vector<ScoredCandidate> action_scores;
  std::string created_at;
  std::string updated_at;
  std::uint64_t revision = 0;

  bool operator==(const TranslatedRuleDoc &) const = default;
};

nlohmann::json to_json(const TranslatedRuleDoc &doc);
TranslatedRuleDoc rule_from_json(const nlohmann::json &doc);

struct RuleFilter {
  std::optional<std::string> platform;
  std::optional<Method> method;
};

using Clock = std::function<std::string()>;

// ISO 8601 UTC with milliseconds, e.g. "2026-10-16T10:31:00.123Z".
std::string utc_now();

class RuleStore {
 public:
  // An empty path keeps everything in memory.
  explicit RuleStore(std::filesystem::path path = {}, Clock clock = utc_now);

  RuleStore(const RuleStore &) = delete;
  RuleStore &operator=(const RuleStore &) = delete;

  // `doc.revision` must equal the stored revision (0 for a new id); the
  // stored copy gets revision + 1, which is returned. An empty id is
  // replaced by a generated one. Throws kConflict on a stale revision.
  std::uint64_t put_rule(TranslatedRuleDoc doc);
  // Same as put_rule but also reports the id that was assigned.
  TranslatedRuleDoc put_rule_returning(TranslatedRuleDoc doc);

  TranslatedRuleDoc get_rule(std::string_view id) const;  // throws kNotFound
  std::optional<TranslatedRuleDoc> find_rule(std::string_view id) const;
  std::vector<TranslatedRuleDoc> list_rules(const RuleFilter &filter = {}) const;

  // Overwrites unconditionally; used when pulling from a remote container.
  void store_replica(const TranslatedRuleDoc &doc);

  // Supersedes any earlier review for (source_name, kind).
  ReviewRecord record_review(ReviewRecord review);
  std::optional<ReviewRecord> lookup_review(std::string_view source_name,
                                            TermKind kind) const;
  std::vector<ReviewRecord> list_reviews() const;
  // Bound to this store; valid for the store's lifetime.
  ReviewLookup review_lookup() const;

  // Rewrites the log with one record per live key.
  void compact();
  std::size_t log_records() const;

 private:
  void replay();
  void append(const nlohmann::json &record);

  std::filesystem::path path_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  std::ofstream log_;
  std::size_t log_records_ = 0;
  std::map<std::string, TranslatedRuleDoc, std::less<>> rules_;
  std::map<std::pair<std::string, TermKind>, ReviewRecord> reviews_;
};

class RemoteContainer {
 public:
  virtual ~RemoteContainer() = default;
  virtual std::map<std::string, std::uint64_t> manifest() = 0;
  virtual TranslatedRuleDoc fetch(const std::string &id) = 0;
  virtual void store(const TranslatedRuleDoc &doc) = 0;
};

struct ContainerConfig {
  std::string url;    // e.g. "http://127.0.0.1:8600/pod"
  std::string token;  // sent as "Authorization: Bearer <token>" when set
  std::chrono::milliseconds timeout{10000};
};

// Plain HTTP container: GET {url}/rules -> {"id": revision, ...},
// GET/PUT {url}/rules/{id} with the document as JSON. Errors surface as
// kUnavailable (transport, 5xx, auth) or kNotFound.
class HttpContainer : public RemoteContainer {
 public:
  explicit HttpContainer(ContainerConfig config);

  std::map<std::string, std::uint64_t> manifest() override;
  TranslatedRuleDoc fetch(const std::string &id) override;
  void store(const TranslatedRuleDoc &doc) override;

 private:
  ContainerConfig config_;
  std::string scheme_host_port_;
  std::string base_path_;
};

struct SyncReport {
  std::vector<std::string> pushed;
  std::vector<std::string> pulled;
  std::vector<std::string> conflicted;
  std::vector<std::string> errors;

  bool complete() const { return errors.empty(); }
  bool no_op() const { return pushed.empty() && pulled.empty(); }
};

nlohmann::ordered_json to_json(const SyncReport &report);

// Works on a snapshot of the local store. Per-document failures are recorded
// in the report and do not stop the run.
SyncReport sync_remote(RuleStore &store, RemoteContainer &container);

// Percent-encodes everything outside the RFC 3986 unreserved set.
std::string encode_path_segment(std::string_view text);

}  // namespace rulebridge

#endif  // RULEBRIDGE_RULESTORE_H_
