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

#include "rulebridge/review.h"

namespace rulebridge {

using nlohmann::json;

std::string_view to_string(Accuracy accuracy) {
  switch (accuracy) {
    case Accuracy::kNotAtAll:
      return "not_at_all";
    case Accuracy::kLow:
      return "low";
    case Accuracy::kAccurate:
      return "accurate";
    case Accuracy::kVeryAccurate:
      return "very_accurate";
  }
  return "accurate";
}

std::optional<Accuracy> parse_accuracy(std::string_view text) {
  if (text == "not_at_all") return Accuracy::kNotAtAll;
  if (text == "low") return Accuracy::kLow;
  if (text == "accurate") return Accuracy::kAccurate;
  if (text == "very_accurate") return Accuracy::kVeryAccurate;
  return std::nullopt;
}

json to_json(const ReviewRecord &r) {
  json out = {{"source_name", r.source_name},
              {"kind", std::string(to_string(r.kind))}};
  if (r.chosen) {
    out["verdict"] = "chosen";
    out["candidate"] = *r.chosen;
  } else {
    out["verdict"] = "none_suitable";
  }
  if (r.accuracy) out["accuracy"] = std::string(to_string(*r.accuracy));
  if (r.method) out["method"] = std::string(to_string(*r.method));
  out["reviewer"] = r.reviewer;
  out["created_at"] = r.created_at;
  return out;
}

ReviewRecord review_from_json(const json &doc) {
  auto fail = [](const std::string &why) {
    return Error(ErrorKind::kInvalidInput, "invalid review: " + why);
  };
  if (!doc.is_object()) throw fail("expected an object");
  ReviewRecord r;
  if (!doc.contains("source_name") || !doc["source_name"].is_string() ||
      doc["source_name"].get<std::string>().empty())
    throw fail("missing source_name");
  r.source_name = doc["source_name"].get<std::string>();

  auto kind = parse_term_kind(doc.value("kind", ""));
  if (!kind) throw fail("kind must be 'trigger' or 'action'");
  r.kind = *kind;

  std::string verdict = doc.value("verdict", "");
  if (verdict == "chosen") {
    if (!doc.contains("candidate") || !doc["candidate"].is_string() ||
        doc["candidate"].get<std::string>().empty())
      throw fail("verdict 'chosen' needs a candidate");
    r.chosen = doc["candidate"].get<std::string>();
  } else if (verdict != "none_suitable" && verdict != "none") {
    throw fail("verdict must be 'chosen' or 'none_suitable'");
  }

  if (doc.contains("accuracy") && !doc["accuracy"].is_null()) {
    auto acc = parse_accuracy(doc["accuracy"].get<std::string>());
    if (!acc) throw fail("unknown accuracy label");
    r.accuracy = acc;
  }
  if (doc.contains("method") && !doc["method"].is_null()) {
    auto m = parse_method(doc["method"].get<std::string>());
    if (!m) throw fail("unknown method");
    r.method = m;
  }
  r.reviewer = doc.value("reviewer", "");
  r.created_at = doc.value("created_at", "");
  return r;
}

}  // namespace rulebridge
