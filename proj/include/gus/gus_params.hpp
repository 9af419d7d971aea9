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

#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "gus/lineage.hpp"

namespace gus {

//! Dense table indexed by SubsetMask::bits, length 2^n.
using SubsetValues = std::vector<double>;

//! Parameters of a generalized uniform sampling method over a lineage schema:
//! a = P[t in sample], b_T = P[t, t' in sample | t and t' agree exactly on T].
//! Immutable; the constructor enforces 0 <= a, b_T <= 1 and b_full == a.
class GusParams {
 public:
  GusParams(LineageSchema schema, double a, SubsetValues b);

  const LineageSchema& schema() const { return schema_; }
  double a() const { return a_; }
  double b(SubsetMask t) const { return b_[t.bits]; }
  std::span<const double> b_table() const { return b_; }

  bool operator==(const GusParams&) const = default;

 private:
  LineageSchema schema_;
  double a_;
  SubsetValues b_;
};

//! Snaps values within 1e-12 of [0, 1] into the interval; throws beyond that.
double clamp_probability(double v, const char* what);

//! Same method viewed over a wider schema: b_T = b_{T ∩ old schema}.
GusParams extend_schema(const GusParams& g, const LineageSchema& wider);

nlohmann::json to_json(const GusParams& g);
GusParams gus_params_from_json(const nlohmann::json& j);

//! Serializes a subset-indexed table as {"<subset key>": value}.
nlohmann::json subset_table_to_json(const LineageSchema& schema, std::span<const double> values);

}  // namespace gus
