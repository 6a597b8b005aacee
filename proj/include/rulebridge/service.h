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

// HTTP API over an Engine.
//
//   GET  /api/health
//   GET  /api/catalog/{kind}          ?source=ontology for ontology terms
//   POST /api/translate               {"name", "kind", "method", "top"}
//   GET  /api/results?kind=&name=     persisted batch results
//   POST /api/reviews, GET /api/reviews
//   GET  /api/rules, GET/PUT /api/rules/{id}
//   GET  /ui/...                      static review UI bundle
//
// Errors use the envelope {"error": {"code", "message", "detail"?}} with a
// code from api_error_codes().

#ifndef RULEBRIDGE_SERVICE_H_
#define RULEBRIDGE_SERVICE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rulebridge/engine.h"

namespace httplib {
class Server;
}

namespace rulebridge {

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
  std::optional<nlohmann::json> detail;
};

const std::vector<std::string> &api_error_codes();
nlohmann::ordered_json to_json(const ApiError &error);
// Maps a library error onto the closed code set.
ApiError api_error_from(const Error &error);

struct ApiRequest {
  std::string method;  // "GET", "POST", ...
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string authorization;  // raw Authorization header
};

struct ApiResponse {
  int status = 200;
  nlohmann::ordered_json body;
};

// Routing and handlers without any transport; safe for concurrent use.
class Api {
 public:
  explicit Api(Engine &engine) : engine_(engine) {}

  ApiResponse handle(const ApiRequest &request) const;
  const Engine &engine() const { return engine_; }

 private:
  ApiResponse route(const ApiRequest &request) const;
  ApiResponse health() const;
  ApiResponse catalog(const std::string &kind, const ApiRequest &request) const;
  ApiResponse translate(const ApiRequest &request) const;
  ApiResponse results(const ApiRequest &request) const;
  ApiResponse post_review(const ApiRequest &request) const;
  ApiResponse list_reviews(const ApiRequest &request) const;
  ApiResponse list_rules(const ApiRequest &request) const;
  ApiResponse get_rule(const std::string &id) const;
  ApiResponse put_rule(const std::string &id, const ApiRequest &request) const;

  Engine &engine_;
};

// Registers /api/* handlers and, when the engine config names a UI
// directory, the /ui/ mount. `api` must outlive the server.
void mount(httplib::Server &server, const Api &api);

// Blocks until the server stops. Throws kIo when the port cannot be bound.
void serve(Engine &engine);

}  // namespace rulebridge

#endif  // RULEBRIDGE_SERVICE_H_
