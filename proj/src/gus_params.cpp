/*
 * Copyright 2026 The gus Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gus/gus_params.hpp"

#include <cmath>
#include <string>

#include "gus/error.hpp"

namespace gus {

namespace {

constexpr double kSnap = 1e-12;

void check_probability(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw SampleSizeError("GUS parameter " + what + " = " + std::to_string(v) + " is outside [0, 1]");
  }
}

}  // namespace

GusParams::GusParams(LineageSchema schema, double a, SubsetValues b)
    : schema_(std::move(schema)), a_(a), b_(std::move(b)) {
  if (b_.size() != schema_.table_size()) {
    throw SchemaError("GUS b-table has " + std::to_string(b_.size()) + " entries, schema needs " +
                      std::to_string(schema_.table_size()));
  }
  check_probability(a_, "a");
  for (std::size_t t = 0; t < b_.size(); ++t) {
    check_probability(b_[t], "b_{" + schema_.subset_key(SubsetMask(static_cast<std::uint32_t>(t))) + "}");
  }
  // Agreement on every base relation means t == t', so the pair probability is a.
  if (b_[schema_.full_mask().bits] != a_) {
    throw SchemaError("GUS b at the full lineage mask must equal a");
  }
}

double clamp_probability(double v, const char* what) {
  if (v < 0.0 && v > -kSnap) return 0.0;
  if (v > 1.0 && v < 1.0 + kSnap) return 1.0;
  if (!(v >= 0.0 && v <= 1.0)) {
    throw SampleSizeError(std::string("computed ") + what + " = " + std::to_string(v) + " is outside [0, 1]");
  }
  return v;
}

GusParams extend_schema(const GusParams& g, const LineageSchema& wider) {
  if (!g.schema().is_subset_of(wider)) {
    throw SchemaError("extend_schema: GUS schema is not contained in the target schema");
  }
  SubsetValues b(wider.table_size());
  for (std::uint32_t t = 0; t < b.size(); ++t) {
    b[t] = g.b(g.schema().restrict_from(SubsetMask(t), wider));
  }
  return GusParams(wider, g.a(), std::move(b));
}

nlohmann::json subset_table_to_json(const LineageSchema& schema, std::span<const double> values) {
  auto out = nlohmann::json::object();
  for (std::uint32_t t = 0; t < values.size(); ++t) {
    out[schema.subset_key(SubsetMask(t))] = values[t];
  }
  return out;
}

nlohmann::json to_json(const GusParams& g) {
  return nlohmann::json{{"schema", g.schema().relations()},
                        {"a", g.a()},
                        {"b", subset_table_to_json(g.schema(), g.b_table())}};
}

GusParams gus_params_from_json(const nlohmann::json& j) {
  try {
    LineageSchema schema(j.at("schema").get<std::vector<std::string>>());
    const double a = j.at("a").get<double>();
    SubsetValues b(schema.table_size(), std::nan(""));
    for (const auto& [key, value] : j.at("b").items()) {
      b[schema.parse_subset_key(key).bits] = value.get<double>();
    }
    for (std::uint32_t t = 0; t < b.size(); ++t) {
      if (std::isnan(b[t])) {
        throw SchemaError("GUS JSON is missing b for subset '" + schema.subset_key(SubsetMask(t)) + "'");
      }
    }
    return GusParams(std::move(schema), a, std::move(b));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed GUS JSON: ") + e.what());
  }
}

}  // namespace gus
