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

#include "rulebridge/rulestore.h"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <random>
#include <set>

#include "httplib.h"

namespace rulebridge {

using nlohmann::json;

namespace {

json scores_json(const std::vector<ScoredCandidate> &list) {
  json out = json::array();
  for (const auto &c : list) {
    json rec = candidate_record(c);
    // The percent form alone does not round-trip the 0..1 value.
    if (c.embedding) rec["similarity"] = *c.embedding;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ScoredCandidate> scores_from_json(const json &list, TermKind kind) {
  std::vector<ScoredCandidate> out;
  if (!list.is_array()) return out;
  for (const auto &item : list) {
    ScoredCandidate c = candidate_from_json(item);
    c.kind = kind;
    if (item.contains("similarity")) c.embedding = item["similarity"].get<double>();
    out.push_back(std::move(c));
  }
  return out;
}

json optional_string(const std::optional<std::string> &s) {
  return s ? json(*s) : json(nullptr);
}

std::optional<std::string> read_optional(const json &doc, const char *key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  return doc[key].get<std::string>();
}

std::string generate_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[40];
  std::snprintf(buf, sizeof buf, "rule-%016llx%08llx",
                static_cast<unsigned long long>(gen()),
                static_cast<unsigned long long>(gen() & 0xffffffffULL));
  return buf;
}

bool matches(const TranslatedRuleDoc &doc, const RuleFilter &filter) {
  if (filter.platform && doc.source_platform != *filter.platform) return false;
  if (filter.method && doc.method != *filter.method) return false;
  return true;
}

void split_url(const std::string &url, std::string *scheme_host_port,
               std::string *base_path) {
  std::size_t scheme = url.find("://");
  std::size_t path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  *scheme_host_port = url.substr(0, path);
  *base_path = path == std::string::npos ? "" : url.substr(path);
  while (!base_path->empty() && base_path->back() == '/') base_path->pop_back();
}

}  // namespace

json to_json(const TranslatedRuleDoc &d) {
  return {{"id", d.id},
          {"source_platform", d.source_platform},
          {"original_trigger", d.original_trigger},
          {"original_action", d.original_action},
          {"translated_trigger", optional_string(d.translated_trigger)},
          {"translated_action", optional_string(d.translated_action)},
          {"method", std::string(to_string(d.method))},
          {"scores",
           {{"trigger", scores_json(d.trigger_scores)},
            {"action", scores_json(d.action_scores)}}},
          {"created_at", d.created_at},
          {"updated_at", d.updated_at},
          {"revision", d.revision}};
}

TranslatedRuleDoc rule_from_json(const json &doc) {
  try {
    TranslatedRuleDoc d;
    d.id = doc.value("id", "");
    d.source_platform = doc.value("source_platform", "");
    d.original_trigger = doc.value("original_trigger", "");
    d.original_action = doc.value("original_action", "");
    d.translated_trigger = read_optional(doc, "translated_trigger");
    d.translated_action = read_optional(doc, "translated_action");
    auto method = parse_method(doc.value("method", "combined"));
    if (!method) throw Error(ErrorKind::kInvalidInput, "invalid rule: unknown method");
    d.method = *method;
    if (doc.contains("scores")) {
      const json &s = doc["scores"];
      if (s.contains("trigger"))
        d.trigger_scores = scores_from_json(s["trigger"], TermKind::kTrigger);
      if (s.contains("action"))
        d.action_scores = scores_from_json(s["action"], TermKind::kAction);
    }
    d.created_at = doc.value("created_at", "");
    d.updated_at = doc.value("updated_at", "");
    d.revision = doc.value("revision", std::uint64_t{0});
    return d;
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kInvalidInput, std::string("invalid rule: ") + e.what());
  }
}

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                now.time_since_epoch()) % 1000;
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms.count()));
  return out;
}

RuleStore::RuleStore(std::filesystem::path path, Clock clock)
    : path_(std::move(path)), clock_(std::move(clock)) {
  if (path_.empty()) return;
  replay();
  log_.open(path_, std::ios::binary | std::ios::app);
  if (!log_) throw Error(ErrorKind::kIo, "cannot open store " + path_.string());
}

void RuleStore::replay() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> bad_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (bad_line)
      throw Error(ErrorKind::kParse, path_.string() + ": corrupt record at line " +
                                         std::to_string(*bad_line));
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      // A torn final write is tolerated; anything earlier is corruption.
      bad_line = line_no;
      continue;
    }
    std::string op = record.value("op", "");
    if (op == "rule") {
      TranslatedRuleDoc doc = rule_from_json(record.at("doc"));
      rules_[doc.id] = std::move(doc);
    } else if (op == "review") {
      ReviewRecord review = review_from_json(record.at("review"));
      reviews_[{review.source_name, review.kind}] = std::move(review);
    } else {
      throw Error(ErrorKind::kParse, path_.string() + ": unknown op at line " +
                                         std::to_string(line_no));
    }
    ++log_records_;
  }
}

void RuleStore::append(const json &record) {
  ++log_records_;
  if (path_.empty()) return;
  log_ << record.dump() << '\n';
  log_.flush();
  if (!log_) throw Error(ErrorKind::kIo, "write failed: " + path_.string());
}

std::uint64_t RuleStore::put_rule(TranslatedRuleDoc doc) {
  return put_rule_returning(std::move(doc)).revision;
}

TranslatedRuleDoc RuleStore::put_rule_returning(TranslatedRuleDoc doc) {
  std::unique_lock lock(mu_);
  if (doc.id.empty()) doc.id = generate_id();
  auto it = rules_.find(doc.id);
  std::uint64_t current = it == rules_.end() ? 0 : it->second.revision;
  if (doc.revision != current)
    throw Error(ErrorKind::kConflict,
                "revision conflict on '" + doc.id + "': supplied " +
                    std::to_string(doc.revision) + ", stored " + std::to_string(current));
  std::string now = clock_();
  if (it != rules_.end())
    doc.created_at = it->second.created_at;
  else if (doc.created_at.empty())
    doc.created_at = now;
  doc.updated_at = now;
  doc.revision = current + 1;
  append({{"op", "rule"}, {"doc", to_json(doc)}});
  rules_[doc.id] = doc;
  return doc;
}

TranslatedRuleDoc RuleStore::get_rule(std::string_view id) const {
  auto doc = find_rule(id);
  if (!doc) throw Error(ErrorKind::kNotFound, "unknown rule id '" + std::string(id) + "'");
  return *doc;
}

std::optional<TranslatedRuleDoc> RuleStore::find_rule(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = rules_.find(id);
  if (it == rules_.end()) return std::nullopt;
  return it->second;
}

std::vector<TranslatedRuleDoc> RuleStore::list_rules(const RuleFilter &filter) const {
  std::shared_lock lock(mu_);
  std::vector<TranslatedRuleDoc> out;
  for (const auto &[id, doc] : rules_)
    if (matches(doc, filter)) out.push_back(doc);
  return out;
}

void RuleStore::store_replica(const TranslatedRuleDoc &doc) {
  if (doc.id.empty()) throw Error(ErrorKind::kInvalidInput, "replica without id");
  std::unique_lock lock(mu_);
  append({{"op", "rule"}, {"doc", to_json(doc)}});
  rules_[doc.id] = doc;
}

ReviewRecord RuleStore::record_review(ReviewRecord review) {
  if (review.source_name.empty())
    throw Error(ErrorKind::kInvalidInput, "review without source name");
  std::unique_lock lock(mu_);
  if (review.created_at.empty()) review.created_at = clock_();
  append({{"op", "review"}, {"review", to_json(review)}});
  reviews_[{review.source_name, review.kind}] = review;
  return review;
}

std::optional<ReviewRecord> RuleStore::lookup_review(std::string_view source_name,
                                                     TermKind kind) const {
  std::shared_lock lock(mu_);
  auto it = reviews_.find({std::string(source_name), kind});
  if (it == reviews_.end()) return std::nullopt;
  return it->second;
}

std::vector<ReviewRecord> RuleStore::list_reviews() const {
  std::shared_lock lock(mu_);
  std::vector<ReviewRecord> out;
  for (const auto &[key, review] : reviews_) out.push_back(review);
  return out;
}

ReviewLookup RuleStore::review_lookup() const {
  return [this](std::string_view name, TermKind kind) {
    return lookup_review(name, kind);
  };
}

void RuleStore::compact() {
  std::unique_lock lock(mu_);
  std::size_t records = rules_.size() + reviews_.size();
  if (path_.empty()) {
    log_records_ = records;
    return;
  }
  std::filesystem::path tmp = path_;
  tmp += ".compact";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    for (const auto &[id, doc] : rules_)
      out << json{{"op", "rule"}, {"doc", to_json(doc)}}.dump() << '\n';
    for (const auto &[key, review] : reviews_)
      out << json{{"op", "review"}, {"review", to_json(review)}}.dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::kIo, "write failed: " + tmp.string());
  }
  log_.close();
  std::filesystem::rename(tmp, path_);
  log_.open(path_, std::ios::binary | std::ios::app);
  if (!log_) throw Error(ErrorKind::kIo, "cannot reopen store " + path_.string());
  log_records_ = records;
}

std::size_t RuleStore::log_records() const {
  std::shared_lock lock(mu_);
  return log_records_;
}

std::string encode_path_segment(std::string_view text) {
  static const char *hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                      c == '~';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

HttpContainer::HttpContainer(ContainerConfig config) : config_(std::move(config)) {
  split_url(config_.url, &scheme_host_port_, &base_path_);
  if (scheme_host_port_.empty())
    throw Error(ErrorKind::kInvalidInput, "container url is empty");
}

namespace {

httplib::Headers auth_headers(const ContainerConfig &config) {
  httplib::Headers headers;
  if (!config.token.empty())
    headers.emplace("Authorization", "Bearer " + config.token);
  return headers;
}

void configure(httplib::Client &client, std::chrono::milliseconds timeout) {
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
}

void check_response(const httplib::Result &res, const std::string &what) {
  if (!res)
    throw Error(ErrorKind::kUnavailable,
                what + ": transport failure: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403)
    throw Error(ErrorKind::kUnavailable,
                what + ": auth failure (status " + std::to_string(res->status) + ")");
  if (res->status == 404) throw Error(ErrorKind::kNotFound, what + ": not found");
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorKind::kUnavailable,
                what + ": status " + std::to_string(res->status));
}

json parse_body(const std::string &body, const std::string &what) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded())
    throw Error(ErrorKind::kUnavailable, what + ": malformed response body");
  return doc;
}

}  // namespace

std::map<std::string, std::uint64_t> HttpContainer::manifest() {
  httplib::Client client(scheme_host_port_);
  configure(client, config_.timeout);
  auto res = client.Get(base_path_ + "/rules", auth_headers(config_));
  check_response(res, "GET /rules");
  json doc = parse_body(res->body, "GET /rules");
  if (!doc.is_object())
    throw Error(ErrorKind::kUnavailable, "GET /rules: manifest is not an object");
  std::map<std::string, std::uint64_t> out;
  for (const auto &[id, rev] : doc.items()) {
    if (!rev.is_number_unsigned() && !rev.is_number_integer())
      throw Error(ErrorKind::kUnavailable, "GET /rules: bad revision for " + id);
    out[id] = rev.get<std::uint64_t>();
  }
  return out;
}

TranslatedRuleDoc HttpContainer::fetch(const std::string &id) {
  httplib::Client client(scheme_host_port_);
  configure(client, config_.timeout);
  std::string what = "GET /rules/" + id;
  auto res = client.Get(base_path_ + "/rules/" + encode_path_segment(id),
                        auth_headers(config_));
  check_response(res, what);
  return rule_from_json(parse_body(res->body, what));
}

void HttpContainer::store(const TranslatedRuleDoc &doc) {
  httplib::Client client(scheme_host_port_);
  configure(client, config_.timeout);
  auto res = client.Put(base_path_ + "/rules/" + encode_path_segment(doc.id),
                        auth_headers(config_), to_json(doc).dump(), "application/json");
  check_response(res, "PUT /rules/" + doc.id);
}

nlohmann::ordered_json to_json(const SyncReport &report) {
  nlohmann::ordered_json out;
  out["pushed"] = report.pushed;
  out["pulled"] = report.pulled;
  out["conflicted"] = report.conflicted;
  out["errors"] = report.errors;
  out["complete"] = report.complete();
  return out;
}

SyncReport sync_remote(RuleStore &store, RemoteContainer &container) {
  SyncReport report;
  std::vector<TranslatedRuleDoc> local = store.list_rules();
  std::map<std::string, std::uint64_t> remote;
  try {
    remote = container.manifest();
  } catch (const std::exception &e) {
    report.errors.push_back(e.what());
    return report;
  }

  auto push = [&](const TranslatedRuleDoc &doc) {
    try {
      container.store(doc);
      report.pushed.push_back(doc.id);
    } catch (const std::exception &e) {
      report.errors.push_back(e.what());
    }
  };
  auto pull = [&](const std::string &id) {
    try {
      store.store_replica(container.fetch(id));
      report.pulled.push_back(id);
    } catch (const std::exception &e) {
      report.errors.push_back(e.what());
    }
  };

  std::set<std::string> local_ids;
  for (const auto &doc : local) {
    local_ids.insert(doc.id);
    auto it = remote.find(doc.id);
    if (it == remote.end() || doc.revision > it->second) {
      push(doc);
      continue;
    }
    if (it->second > doc.revision) {
      pull(doc.id);
      continue;
    }
    // Same revision: only the content and timestamps can tell them apart.
    TranslatedRuleDoc theirs;
    try {
      theirs = container.fetch(doc.id);
    } catch (const std::exception &e) {
      report.errors.push_back(e.what());
      continue;
    }
    if (theirs == doc) continue;
    if (doc.updated_at > theirs.updated_at) {
      push(doc);
    } else if (theirs.updated_at > doc.updated_at) {
      try {
        store.store_replica(theirs);
        report.pulled.push_back(doc.id);
      } catch (const std::exception &e) {
        report.errors.push_back(e.what());
      }
    } else {
      report.conflicted.push_back(doc.id);
    }
  }
  for (const auto &[id, rev] : remote)
    if (!local_ids.count(id)) pull(id);
  return report;
}

}  // namespace rulebridge
