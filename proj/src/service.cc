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

#include "rulebridge/service.h"

#include <iostream>

#include "httplib.h"

namespace rulebridge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char *kApiPrefix = "/api/";

ApiResponse error_response(ApiError e) {
  return {e.status, to_json(e)};
}

ApiResponse error_response(int status, std::string code, std::string message) {
  return error_response(ApiError{status, std::move(code), std::move(message), std::nullopt});
}

json parse_body(const ApiRequest &request) {
  json doc = json::parse(request.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw ApiError{400, "invalid-request", "request body must be a JSON object", std::nullopt};
  return doc;
}

TermKind require_kind(const std::string &text) {
  auto kind = parse_term_kind(text);
  if (!kind)
    throw ApiError{400, "invalid-kind", "kind must be 'trigger' or 'action', got '" + text + "'",
                   std::nullopt};
  return *kind;
}

std::optional<std::string> query(const ApiRequest &request, const std::string &key) {
  auto it = request.query.find(key);
  if (it == request.query.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

ordered_json ordered(const json &doc) { return ordered_json::parse(doc.dump()); }

ApiResponse method_not_allowed(const ApiRequest &request) {
  return error_response(405, "method-not-allowed",
                        request.method + " not supported on " + request.path);
}

}  // namespace

const std::vector<std::string> &api_error_codes() {
  static const std::vector<std::string> codes = {
      "invalid-request", "invalid-kind",       "invalid-method",
      "unauthorized",    "not-found",          "method-not-allowed",
      "conflict",        "scorer-unavailable", "internal",
  };
  return codes;
}

ordered_json to_json(const ApiError &e) {
  ordered_json inner;
  inner["code"] = e.code;
  inner["message"] = e.message;
  if (e.detail) inner["detail"] = *e.detail;
  ordered_json out;
  out["error"] = std::move(inner);
  return out;
}

ApiError api_error_from(const Error &e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidInput:
    case ErrorKind::kParse:
      return {400, "invalid-request", e.what(), std::nullopt};
    case ErrorKind::kNotFound:
      return {404, "not-found", e.what(), std::nullopt};
    case ErrorKind::kConflict:
      return {409, "conflict", e.what(), std::nullopt};
    case ErrorKind::kUnavailable:
      return {503, "scorer-unavailable", e.what(), std::nullopt};
    case ErrorKind::kIo:
      break;
  }
  return {500, "internal", e.what(), std::nullopt};
}

ApiResponse Api::handle(const ApiRequest &request) const {
  try {
    return route(request);
  } catch (const ApiError &e) {
    return error_response(e);
  } catch (const Error &e) {
    return error_response(api_error_from(e));
  } catch (const std::exception &e) {
    return error_response(500, "internal", e.what());
  }
}

ApiResponse Api::route(const ApiRequest &request) const {
  std::vector<std::string> parts = split_path(request.path);
  if (parts.empty() || parts[0] != "api")
    return error_response(404, "not-found", "no route for " + request.path);

  const std::string &m = request.method;
  if (parts.size() == 2 && parts[1] == "health")
    return m == "GET" ? health() : method_not_allowed(request);

  const std::string &token = engine_.config().token;
  if (!token.empty() && request.authorization != "Bearer " + token)
    return error_response(401, "unauthorized", "missing or invalid bearer token");

  if (parts.size() == 3 && parts[1] == "catalog")
    return m == "GET" ? catalog(parts[2], request) : method_not_allowed(request);
  if (parts.size() == 2 && parts[1] == "translate")
    return m == "POST" ? translate(request) : method_not_allowed(request);
  if (parts.size() == 2 && parts[1] == "results")
    return m == "GET" ? results(request) : method_not_allowed(request);
  if (parts.size() == 2 && parts[1] == "reviews") {
    if (m == "POST") return post_review(request);
    if (m == "GET") return list_reviews(request);
    return method_not_allowed(request);
  }
  if (parts.size() == 2 && parts[1] == "rules")
    return m == "GET" ? list_rules(request) : method_not_allowed(request);
  if (parts.size() == 3 && parts[1] == "rules") {
    std::string id = httplib::detail::decode_url(parts[2], false);
    if (m == "GET") return get_rule(id);
    if (m == "PUT") return put_rule(id, request);
    return method_not_allowed(request);
  }
  return error_response(404, "not-found", "no route for " + request.path);
}

ApiResponse Api::health() const {
  CorpusSummary s = engine_.summary();
  ordered_json out;
  out["status"] = "ok";
  out["triggers"] = s.triggers;
  out["actions"] = s.actions;
  out["ontology_triggers"] = s.ontology_triggers;
  out["ontology_actions"] = s.ontology_actions;
  out["vectors"] = s.vectors;
  out["entailment_backend"] = to_string(engine_.config().pipeline.entailment_backend);
  return {200, out};
}

ApiResponse Api::catalog(const std::string &kind_text, const ApiRequest &request) const {
  TermKind kind = require_kind(kind_text);
  std::string source = query(request, "source").value_or("proprietary");
  ordered_json terms = ordered_json::array();
  if (source == "proprietary") {
    for (const auto &t : engine_.catalog().terms(kind))
      terms.push_back({{"name", t.name}, {"usage_count", t.usage_count}});
  } else if (source == "ontology") {
    for (const auto &t : engine_.ontology().terms(kind))
      terms.push_back({{"name", t.name}, {"raw_id", t.raw_id}});
  } else {
    throw ApiError{400, "invalid-request", "source must be 'proprietary' or 'ontology'",
                   std::nullopt};
  }
  ordered_json out;
  out["kind"] = to_string(kind);
  out["source"] = source;
  out["count"] = terms.size();
  out["terms"] = std::move(terms);
  return {200, out};
}

ApiResponse Api::translate(const ApiRequest &request) const {
  json body = parse_body(request);
  if (!body.contains("name") || !body["name"].is_string())
    throw ApiError{400, "invalid-request", "'name' must be a string", std::nullopt};
  if (!body.contains("kind") || !body["kind"].is_string())
    throw ApiError{400, "invalid-kind", "'kind' must be 'trigger' or 'action'", std::nullopt};
  TermKind kind = require_kind(body["kind"].get<std::string>());

  Method method = engine_.config().pipeline.method;
  if (body.contains("method")) {
    std::optional<Method> parsed;
    if (body["method"].is_string()) parsed = parse_method(body["method"].get<std::string>());
    if (!parsed)
      throw ApiError{400, "invalid-method",
                     "method must be 'embedding', 'entailment' or 'combined'", std::nullopt};
    method = *parsed;
  }

  std::size_t top = engine_.config().pipeline.top_n;
  if (body.contains("top")) {
    if (!body["top"].is_number_unsigned())
      throw ApiError{400, "invalid-request", "'top' must be a non-negative integer",
                     std::nullopt};
    top = body["top"].get<std::size_t>();
  }

  TranslationResult result = engine_.translate(body["name"].get<std::string>(), kind, method);
  return {200, to_json(result, top)};
}

ApiResponse Api::results(const ApiRequest &request) const {
  std::optional<std::string> kind;
  if (auto k = query(request, "kind")) kind = std::string(to_string(require_kind(*k)));
  std::optional<std::string> name = query(request, "name");
  if (name) *name = clean_name(*name);
  std::optional<std::string> method;
  if (auto m = query(request, "method")) {
    auto parsed = parse_method(*m);
    if (!parsed)
      throw ApiError{400, "invalid-method", "unknown method '" + *m + "'", std::nullopt};
    method = std::string(to_string(*parsed));
  }
  ordered_json matches = ordered_json::array();
  for (const auto &doc : engine_.persisted_results()) {
    if (kind && doc.value("kind", "") != *kind) continue;
    if (name && doc.value("ifttt_name", "") != *name) continue;
    if (method && doc.value("method", "") != *method) continue;
    matches.push_back(doc);
  }
  ordered_json out;
  out["count"] = matches.size();
  out["results"] = std::move(matches);
  return {200, out};
}

ApiResponse Api::post_review(const ApiRequest &request) const {
  json body = parse_body(request);
  if (!body.contains("kind") || !body["kind"].is_string())
    throw ApiError{400, "invalid-kind", "'kind' must be 'trigger' or 'action'", std::nullopt};
  TermKind kind = require_kind(body["kind"].get<std::string>());
  ReviewRecord review = review_from_json(body);
  review.source_name = clean_name(review.source_name);
  if (review.source_name.empty())
    throw ApiError{400, "invalid-request", "source_name is empty after cleaning", std::nullopt};
  if (review.chosen && !engine_.ontology().contains(*review.chosen, kind))
    throw ApiError{400, "invalid-request",
                   "'" + *review.chosen + "' is not an ontology " +
                       std::string(to_string(kind)),
                   std::nullopt};
  ReviewRecord stored = engine_.store().record_review(std::move(review));
  return {201, ordered(to_json(stored))};
}

ApiResponse Api::list_reviews(const ApiRequest &request) const {
  std::optional<TermKind> kind;
  if (auto k = query(request, "kind")) kind = require_kind(*k);
  std::optional<std::string> name = query(request, "name");
  if (name) *name = clean_name(*name);
  ordered_json items = ordered_json::array();
  for (const auto &r : engine_.store().list_reviews()) {
    if (kind && r.kind != *kind) continue;
    if (name && r.source_name != *name) continue;
    items.push_back(ordered(to_json(r)));
  }
  ordered_json out;
  out["count"] = items.size();
  out["reviews"] = std::move(items);
  return {200, out};
}

ApiResponse Api::list_rules(const ApiRequest &request) const {
  RuleFilter filter;
  filter.platform = query(request, "platform");
  if (auto m = query(request, "method")) {
    filter.method = parse_method(*m);
    if (!filter.method)
      throw ApiError{400, "invalid-method", "unknown method '" + *m + "'", std::nullopt};
  }
  ordered_json items = ordered_json::array();
  for (const auto &doc : engine_.store().list_rules(filter)) items.push_back(ordered(to_json(doc)));
  ordered_json out;
  out["count"] = items.size();
  out["rules"] = std::move(items);
  return {200, out};
}

ApiResponse Api::get_rule(const std::string &id) const {
  return {200, ordered(to_json(engine_.store().get_rule(id)))};
}

ApiResponse Api::put_rule(const std::string &id, const ApiRequest &request) const {
  json body = parse_body(request);
  if (body.contains("id") && body["id"] != id)
    throw ApiError{400, "invalid-request", "body id does not match the path", std::nullopt};
  body["id"] = id;
  TranslatedRuleDoc doc = rule_from_json(body);
  std::uint64_t previous = doc.revision;
  try {
    TranslatedRuleDoc stored = engine_.store().put_rule_returning(std::move(doc));
    return {previous == 0 ? 201 : 200, ordered(to_json(stored))};
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kConflict) throw;
    ApiError err = api_error_from(e);
    if (auto current = engine_.store().find_rule(id))
      err.detail = json{{"current_revision", current->revision}};
    throw err;
  }
}

void mount(httplib::Server &server, const Api &api) {
  auto bridge = [&api](const httplib::Request &req, httplib::Response &res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto &[k, v] : req.params) request.query.emplace(k, v);
    request.body = req.body;
    request.authorization = req.get_header_value("Authorization");
    ApiResponse response = api.handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  const std::string pattern = std::string(kApiPrefix) + ".*";
  server.Get(pattern, bridge);
  server.Post(pattern, bridge);
  server.Put(pattern, bridge);
  server.Delete(pattern, bridge);
  const auto &ui_dir = api.engine().config().ui_dir;
  if (!ui_dir.empty() && !server.set_mount_point("/ui", ui_dir.string()))
    throw Error(ErrorKind::kIo, "ui directory not found: " + ui_dir.string());
}

void serve(Engine &engine) {
  Api api(engine);
  httplib::Server server;
  mount(server, api);
  const auto &cfg = engine.config();
  if (!server.bind_to_port(cfg.host, cfg.port))
    throw Error(ErrorKind::kIo, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port) +
                                    " (port busy?)");
  std::cerr << "rulebridge listening on http://" << cfg.host << ":" << cfg.port << "\n";
  server.listen_after_bind();
}

}  // namespace rulebridge
