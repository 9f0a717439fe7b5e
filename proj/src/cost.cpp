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

#include "sqlharness/cost.hpp"

#include "sqlharness/ingest.hpp"

namespace sqlharness {

namespace {

Rational price_field(const Json& entry, const char* key, const std::string& model) {
  if (!entry.contains(key)) throw ValidationError("pricing model '" + model + "': missing " + key);
  const Json& v = entry.at(key);
  Rational r;
  try {
    if (v.is_string()) {
      r = parse_decimal(v.get<std::string>());
    } else if (v.is_number()) {
      r = parse_decimal(v.dump());
    } else {
      throw ValidationError("not a number");
    }
  } catch (const std::exception&) {
    throw ValidationError("pricing model '" + model + "': " + key + " is not a number");
  }
  if (r < 0) throw ValidationError("pricing model '" + model + "': " + key + " is negative");
  return r;
}

}  // namespace

const PricingModel& PricingTable::at(const std::string& name) const {
  auto it = models.find(name);
  if (it == models.end()) throw ValidationError("no pricing for model '" + name + "'");
  return it->second;
}

PricingTable parse_pricing(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("pricing file must be an object");
  PricingTable table;
  table.currency = doc.value("currency", "");
  if (table.currency.empty()) throw ValidationError("pricing file: missing currency");
  const std::string unit = doc.value("price_unit", "per_token");
  Rational scale(1);
  if (unit == "per_million_tokens") {
    scale = Rational(1, 1000000);
  } else if (unit != "per_token") {
    throw ValidationError("pricing file: unknown price_unit '" + unit + "'");
  }
  if (!doc.contains("models") || !doc.at("models").is_array()) throw ValidationError("pricing file: missing models");
  for (const auto& entry : doc.at("models")) {
    PricingModel m;
    m.name = entry.value("name", "");
    if (m.name.empty()) throw ValidationError("pricing file: model without a name");
    m.price_prompt_cache_hit = price_field(entry, "prompt_cache_hit", m.name) * scale;
    m.price_prompt_cache_miss = price_field(entry, "prompt_cache_miss", m.name) * scale;
    m.price_completion = price_field(entry, "completion", m.name) * scale;
    if (entry.contains("cache_hit_fraction")) {
      m.cache_hit_fraction = price_field(entry, "cache_hit_fraction", m.name);
      if (m.cache_hit_fraction > 1) throw ValidationError("pricing model '" + m.name + "': cache_hit_fraction > 1");
    }
    if (!table.models.emplace(m.name, m).second) throw ValidationError("pricing file: duplicate model '" + m.name + "'");
  }
  return table;
}

PricingTable load_pricing(const std::filesystem::path& path) { return parse_pricing(read_json_file(path)); }

Rational estimate_cost(const Rational& prompt_tokens, const Rational& completion_tokens, const PricingModel& p) {
  if (prompt_tokens < 0 || completion_tokens < 0) throw std::invalid_argument("negative token count");
  const Rational& h = p.cache_hit_fraction;
  return prompt_tokens * (h * p.price_prompt_cache_hit + (Rational(1) - h) * p.price_prompt_cache_miss) +
         completion_tokens * p.price_completion;
}

CostEstimate estimate_cost(const UsageStats& usage, const PricingModel& pricing, const Rational& prompt_share) {
  CostEstimate c;
  if (usage.prompt_tokens && usage.completion_tokens) {
    c.prompt_tokens = Rational(BigInt(*usage.prompt_tokens));
    c.completion_tokens = Rational(BigInt(*usage.completion_tokens));
  } else {
    if (prompt_share < 0 || prompt_share > 1) throw std::invalid_argument("prompt share outside [0, 1]");
    const Rational total{BigInt(usage.tokens)};
    c.prompt_tokens = total * prompt_share;
    c.completion_tokens = total - c.prompt_tokens;
    c.estimated_split = true;
  }
  c.amount = estimate_cost(c.prompt_tokens, c.completion_tokens, pricing);
  return c;
}

}  // namespace sqlharness
