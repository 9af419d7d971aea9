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
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "gus/gus_params.hpp"
#include "gus/plan.hpp"
#include "gus/relation.hpp"

namespace gus {

// Ground truth that does not go through the GUS algebra: brute-force
// enumeration of sampler outcomes, Monte Carlo over seeded executions, and a
// sort-based y_S that shares no code with the SBox's hash group-by.

//! Exact y_S over an unsampled result (f bound), by sort-and-scan group-by.
SubsetValues exact_y_terms(const SampleRelation& full_result);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

//! Default cap on the number of joint sampler outcomes.
inline constexpr std::size_t kMaxConfigurations = std::size_t{1} << 20;

//! Exact E[X] and Var(X) of X = (1/a) Σ f over every joint outcome of the
//! plan's samplers (independent across nodes). Bernoulli contributes all
//! keep/drop vectors, WOR all n-subsets, lineage Bernoulli all keep/drop
//! vectors over distinct base ids. `a` is the inclusion probability used by the
//! estimator. Throws EnumerationInfeasibleError past `max_configurations`.
Moments enumerate_exact_moments(const PlanPtr& plan, const Catalog& catalog, double a,
                                std::size_t max_configurations = kMaxConfigurations);

struct MonteCarloMoments {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

//! Sample mean / variance of X over `trials` seeded executions; trial i runs
//! with seed derive_seed(seed, i).
MonteCarloMoments monte_carlo_moments(const PlanPtr& plan, const Catalog& catalog, double a, std::size_t trials,
                                      std::uint64_t seed);

struct InclusionFrequencies {
  std::size_t trials = 0;
  std::map<Lineage, double> first_order;
  //! Keyed by (smaller, larger) lineage.
  std::map<std::pair<Lineage, Lineage>, double> second_order;
};

//! Empirical P[t in output] and P[t, u in output] over seeded executions.
InclusionFrequencies inclusion_probabilities(const PlanPtr& plan, const Catalog& catalog, std::size_t trials,
                                             std::uint64_t seed);

nlohmann::json to_json(const Moments& m);
nlohmann::json to_json(const MonteCarloMoments& m);

}  // namespace gus
