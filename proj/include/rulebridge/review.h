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

#ifndef RULEBRIDGE_REVIEW_H_
#define RULEBRIDGE_REVIEW_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "rulebridge/types.h"

namespace rulebridge {

enum class Accuracy { kNotAtAll, kLow, kAccurate, kVeryAccurate };

std::string_view to_string(Accuracy accuracy);
std::optional<Accuracy> parse_accuracy(std::string_view text);

// A human decision about one proprietary term. An empty `chosen` means the
// reviewer found no suitable ontology term.
struct ReviewRecord {
  std::string source_name;
  TermKind kind = TermKind::kTrigger;
  std::optional<std::string> chosen;
  std::optional<Accuracy> accuracy;
  std::optional<Method> method;  // which method surfaced the choice, if known
  std::string reviewer;
  std::string created_at;

  bool none_suitable() const { return !chosen.has_value(); }
  bool operator==(const ReviewRecord &) const = default;
};

nlohmann::json to_json(const ReviewRecord &review);
// Accepts {"verdict": "chosen", "candidate": ...} or {"verdict": "none"}.
ReviewRecord review_from_json(const nlohmann::json &doc);

using ReviewLookup =
    std::function<std::optional<ReviewRecord>(std::string_view name, TermKind kind)>;

}  // namespace rulebridge

#endif  // RULEBRIDGE_REVIEW_H_
