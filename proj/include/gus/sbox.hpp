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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gus/gus_params.hpp"
#include "gus/plan.hpp"
#include "gus/relation.hpp"

namespace gus {

enum class CiMethod { Normal, Chebyshev };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

struct EstimateReport {
  explicit EstimateReport(GusParams g) : gus(std::move(g)) {}

  GusParams gus;
  double estimate = 0.0;
  std::size_t sample_rows = 0;
  SubsetValues y_sample;
  SubsetValues y_hat;
  SubsetValues c;
  double variance_raw = 0.0;
  double variance_hat = 0.0;
  double level = 0.95;
  Interval ci_normal;
  Interval ci_chebyshev;
  std::vector<std::pair<double, double>> quantiles;
  std::vector<std::string> diagnostics;
  //! Set on the sub-sample path: rows used for the y_S terms and their GUS.
  std::optional<std::size_t> subsample_rows;
  std::optional<GusParams> subsample_gus;
};

//! X = (1/a) Σ f(t), accumulated in lineage order. Throws NotIdentifiableError for a = 0.
double estimate_sum(const SampleRelation& sample, double a);

//! Y_S = Σ over S-lineage groups of (Σ f in group)^2, for every S.
//! Hash group-by; groups are combined in ascending key order.
SubsetValues y_sample_terms(const SampleRelation& sample);

//! Unbiased ŷ_S from the sample terms Y_S, solved from the full mask downward:
//! ŷ_S = (Y_S - Σ_{∅≠V⊆S^C} c_{S,V} ŷ_{S∪V}) / b_S,
//! c_{S,V} = Σ_{W⊆V} (-1)^{|V|-|W|} b_{S∪W}.
//! Throws NotIdentifiableError naming the subset when some b_S = 0.
SubsetValues y_unbiased(const SubsetValues& y_sample, const GusParams& g);

struct VarianceEstimate {
  double value = 0.0;  // clamped at 0
  double raw = 0.0;
  bool clamped = false;
};

//! σ̂² = Σ_S (c_S / a^2) ŷ_S - ŷ_∅, clamped at zero.
VarianceEstimate variance_estimate(const SubsetValues& y_hat, const SubsetValues& c, double a);

//! Two-sided normal multiplier Φ⁻¹((1 + level) / 2); 1.96 at 0.95.
double normal_multiplier(double level);
//! Chebyshev multiplier 1/√(1 - level); 4.47 at 0.95.
double chebyshev_multiplier(double level);

//! Throws std::invalid_argument unless 0 < level < 1 and sigma >= 0.
Interval confidence_interval(double mu, double sigma, CiMethod method, double level = 0.95);

//! Normal-approximation quantiles μ + Φ⁻¹(q) σ.
std::vector<double> quantile_bounds(double mu, double sigma, const std::vector<double>& quantiles);

struct SboxOptions {
  double level = 0.95;
  std::vector<double> quantiles;
};

//! The full pipeline over one sample: estimate, Y_S, ŷ_S, c_S, σ̂², intervals.
EstimateReport run_sbox(const SampleRelation& sample, const GusParams& g, const SboxOptions& options = {});

//! As run_sbox, but ŷ_S come from a lineage-keyed Bernoulli sub-sample of the
//! sample, analysed with compact(gus_of_lineage_bernoulli(spec), g). The
//! estimate and c_S still use the full sample and g.
EstimateReport subsample_variance(const SampleRelation& sample, const GusParams& g,
                                  const LineageBernoulliSpec& spec, const SboxOptions& options = {});

nlohmann::json to_json(const EstimateReport& report);

}  // namespace gus
