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

#include <cstdint>
#include <random>

#include <nlohmann/json.hpp>

#include "gus/plan.hpp"
#include "gus/relation.hpp"

namespace gus {

//! Seedable generator with a fully specified algorithm (mt19937_64) and
//! hand-rolled conversions, so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  //! Uniform on [0, 1).
  double uniform();
  //! Uniform on [0, bound), rejection sampled. bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

//! Keeps each row independently with probability p.
SampleRelation bernoulli_sample(const SampleRelation& input, double p, std::uint64_t seed);

//! Uniform n-subset via a seeded partial Fisher-Yates shuffle. Kept rows stay
//! in input order. Throws SampleSizeError when n > |input| or n < 0.
SampleRelation wor_sample(const SampleRelation& input, std::int64_t n, std::uint64_t seed);

//! The per-id decision of the lineage-keyed Bernoulli: keyed hash of (seed, id)
//! mapped to [0, 1) and compared with p.
bool lineage_keep(std::int64_t id, double p, std::uint64_t seed);

//! Keeps a row iff every covered relation's base-tuple id passes lineage_keep.
//! The same id gets the same decision in every row it appears in.
SampleRelation lineage_bernoulli(const SampleRelation& input, const LineageBernoulliSpec& spec);

//! Parses "l=0.2,o=0.3" into a lineage Bernoulli spec; per-relation seeds
//! are derived from `seed`.
LineageBernoulliSpec parse_lineage_bernoulli(std::string_view text, std::uint64_t seed);

void validate(const SamplerSpec& spec);

nlohmann::json to_json(const SamplerSpec& spec);
SamplerSpec sampler_spec_from_json(const nlohmann::json& j);

}  // namespace gus
