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

#include "rulebridge/scoring.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "httplib.h"
#include "rulebridge/types.h"

namespace rulebridge {

using nlohmann::json;

namespace {

std::set<std::string> token_set(std::string_view text) {
  std::vector<std::string> tokens = tokenize(text);
  return {tokens.begin(), tokens.end()};
}

std::string format_triple(const EntailmentTriple &t) {
  std::ostringstream out;
  out.precision(17);
  out << "(" << t.entailment << ", " << t.contradiction << ", " << t.neutral << ")";
  return out.str();
}

// RAII slot in the client's in-flight budget.
class Slot {
 public:
  explicit Slot(std::counting_semaphore<> &sem) : sem_(sem) { sem_.acquire(); }
  ~Slot() { sem_.release(); }
  Slot(const Slot &) = delete;
  Slot &operator=(const Slot &) = delete;

 private:
  std::counting_semaphore<> &sem_;
};

}  // namespace

void validate_triple(const EntailmentTriple &t, double tolerance) {
  for (double v : {t.entailment, t.contradiction, t.neutral}) {
    if (!std::isfinite(v))
      throw Error(ErrorKind::kInvalidInput,
                  "entailment triple invariant violated: non-finite component " +
                      format_triple(t));
    if (v < 0.0)
      throw Error(ErrorKind::kInvalidInput,
                  "entailment triple invariant violated: negative component " +
                      format_triple(t));
  }
  if (std::abs(t.sum() - 100.0) > tolerance)
    throw Error(ErrorKind::kInvalidInput,
                "entailment triple invariant violated: components sum to " +
                    std::to_string(t.sum()) + ", expected 100 " + format_triple(t));
}

json to_json(const EntailmentTriple &t) {
  return {{"entailment", t.entailment},
          {"contradiction", t.contradiction},
          {"neutral", t.neutral}};
}

EntailmentTriple triple_from_json(const json &doc) {
  auto number = [&](const char *key) {
    if (!doc.is_object() || !doc.contains(key) || !doc[key].is_number())
      throw Error(ErrorKind::kParse,
                  std::string("malformed entailment response: missing number '") +
                      key + "'");
    return doc[key].get<double>();
  };
  return {number("entailment"), number("contradiction"), number("neutral")};
}

EmbeddingScore VectorSimilarity::score(std::string_view source,
                                       std::string_view candidate) const {
  DocVector a = embed(source, store_);
  DocVector b = embed(candidate, store_);
  if (a.degenerate() || b.degenerate()) return {0.0, true};
  Cosine c = cosine(a, b);
  return {std::max(0.0, c.value), c.degenerate};
}

bool VectorSimilarity::covers(std::string_view text) const {
  return !embed(text, store_).degenerate();
}

EmbeddingScore embedding_score(std::string_view source, std::string_view candidate,
                               const VectorStore &store) {
  return VectorSimilarity(store).score(source, candidate);
}

std::vector<EntailmentTriple> EntailmentScorer::entail_batch(
    std::span<const EntailPair> pairs) const {
  std::vector<EntailmentTriple> out;
  out.reserve(pairs.size());
  for (const auto &p : pairs) out.push_back(entail(p.premise, p.hypothesis));
  return out;
}

std::vector<AntonymPair> default_antonym_pairs() {
  return {{"on", "off"},         {"above", "below"},    {"rises", "drops"},
          {"increased", "decreased"}, {"start", "stop"}, {"open", "close"}};
}

EntailmentTriple ProxyEntailment::entail(std::string_view premise,
                                         std::string_view hypothesis) const {
  std::set<std::string> hyp = token_set(hypothesis);
  if (hyp.empty())
    throw Error(ErrorKind::kInvalidInput,
                "hypothesis has no tokens: '" + std::string(hypothesis) + "'");
  std::set<std::string> prem = token_set(premise);

  std::size_t shared = 0;
  for (const auto &t : hyp) shared += prem.count(t);
  double entailment = 100.0 * static_cast<double>(shared) /
                      static_cast<double>(hyp.size());

  bool conflict = false;
  for (const auto &[x, y] : antonyms_) {
    if ((prem.count(x) && hyp.count(y)) || (prem.count(y) && hyp.count(x))) {
      conflict = true;
      break;
    }
  }
  double rest = 100.0 - entailment;
  double contradiction = (conflict ? 0.6 : 0.1) * rest;
  return {entailment, contradiction, rest - contradiction};
}

EntailmentTriple proxy_entailment(std::string_view premise,
                                  std::string_view hypothesis) {
  static const ProxyEntailment scorer;
  return scorer.entail(premise, hypothesis);
}

RemoteEntailment::RemoteEntailment(RemoteEntailmentConfig config)
    : config_(std::move(config)),
      in_flight_(std::max(1, config_.max_in_flight)) {
  std::string endpoint = config_.endpoint;
  std::size_t scheme = endpoint.find("://");
  std::size_t path = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  scheme_host_port_ = endpoint.substr(0, path);
  if (path != std::string::npos) base_path_ = endpoint.substr(path);
  while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  if (scheme_host_port_.empty())
    throw Error(ErrorKind::kInvalidInput, "entailment endpoint is empty");
}

json RemoteEntailment::post(const std::string &path, const json &body) const {
  Slot slot(in_flight_);
  std::string payload = body.dump();
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= std::max(0, config_.retries); ++attempt) {
    httplib::Client client(scheme_host_port_);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        config_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    auto res = client.Post(base_path_ + path, payload, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorKind::kUnavailable, "entailment service returned status " +
                                               std::to_string(res->status));
    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded())
      throw Error(ErrorKind::kUnavailable, "malformed entailment response");
    return doc;
  }
  throw Error(ErrorKind::kUnavailable, "entailment service unavailable at " +
                                           config_.endpoint + ": " + last_error);
}

namespace {

EntailmentTriple checked_triple(const json &doc) {
  try {
    EntailmentTriple t = triple_from_json(doc);
    validate_triple(t);
    return t;
  } catch (const Error &e) {
    throw Error(ErrorKind::kUnavailable, e.what());
  }
}

}  // namespace

EntailmentTriple RemoteEntailment::entail(std::string_view premise,
                                          std::string_view hypothesis) const {
  json body = {{"premise", premise}, {"hypothesis", hypothesis}};
  return checked_triple(post("/entail", body));
}

std::vector<EntailmentTriple> RemoteEntailment::entail_batch(
    std::span<const EntailPair> pairs) const {
  if (pairs.empty()) return {};
  json body = json::array();
  for (const auto &p : pairs)
    body.push_back({{"premise", p.premise}, {"hypothesis", p.hypothesis}});
  json doc = post("/entail/batch", body);
  if (!doc.is_array() || doc.size() != pairs.size())
    throw Error(ErrorKind::kUnavailable,
                "malformed batch response: expected " + std::to_string(pairs.size()) +
                    " triples");
  std::vector<EntailmentTriple> out;
  out.reserve(pairs.size());
  for (const auto &item : doc) out.push_back(checked_triple(item));
  return out;
}

EntailmentTriple FallbackEntailment::entail(std::string_view premise,
                                            std::string_view hypothesis) const {
  try {
    return primary_->entail(premise, hypothesis);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kUnavailable) throw;
  }
  return fallback_->entail(premise, hypothesis);
}

std::vector<EntailmentTriple> FallbackEntailment::entail_batch(
    std::span<const EntailPair> pairs) const {
  try {
    return primary_->entail_batch(pairs);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kUnavailable) throw;
  }
  return fallback_->entail_batch(pairs);
}

}  // namespace rulebridge
