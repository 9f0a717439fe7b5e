// Copyright 2026 The sqlharness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Token usage to currency, with a cache-hit fraction applied to prompt
// tokens.

#ifndef SQLHARNESS_COST_HPP_
#define SQLHARNESS_COST_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "sqlharness/model.hpp"
#include "sqlharness/rational.hpp"

namespace sqlharness {

inline const Rational kDefaultPromptShare = Rational(4, 5);

struct PricingModel {
  std::string name;
  Rational price_prompt_cache_hit;   // per token
  Rational price_prompt_cache_miss;  // per token
  Rational price_completion;         // per token
  Rational cache_hit_fraction = Rational(1, 2);
};

struct PricingTable {
  std::string currency;
  std::map<std::string, PricingModel> models;

  // Throws ValidationError for an unknown model.
  const PricingModel& at(const std::string& name) const;
};

// Pricing file:
//   {"currency": "USD", "price_unit": "per_token" | "per_million_tokens",
//    "models": [{"name", "prompt_cache_hit", "prompt_cache_miss",
//                "completion", "cache_hit_fraction"?}]}
// Prices may be JSON numbers or decimal strings. Throws ValidationError.
PricingTable parse_pricing(const Json& doc);
PricingTable load_pricing(const std::filesystem::path& path);

// cost = prompt·(h·p_hit + (1−h)·p_miss) + completion·p_out.
// Throws std::invalid_argument on negative token counts.
Rational estimate_cost(const Rational& prompt_tokens, const Rational& completion_tokens, const PricingModel& pricing);

struct CostEstimate {
  Rational amount;
  Rational prompt_tokens;
  Rational completion_tokens;
  bool estimated_split = false;  // the prompt share was applied
};

// Uses the recorded split when present, else splits `tokens` by `prompt_share`.
CostEstimate estimate_cost(const UsageStats& usage, const PricingModel& pricing,
                           const Rational& prompt_share = kDefaultPromptShare);

}  // namespace sqlharness

#endif  // SQLHARNESS_COST_HPP_
