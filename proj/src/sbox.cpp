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

#include "gus/sbox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/distributions/normal.hpp>

#include "gus/algebra.hpp"
#include "gus/error.hpp"
#include "gus/sampling.hpp"

namespace gus {

namespace {

struct IdsHash {
  std::size_t operator()(const std::vector<std::int64_t>& ids) const noexcept {
    return LineageHash{}(Lineage{ids});
  }
};

std::vector<std::size_t> lineage_order(const SampleRelation& sample) {
  std::vector<std::size_t> order(sample.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return sample.rows[x].lineage < sample.rows[y].lineage; });
  return order;
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie strictly between 0 and 1");
  }
}

}  // namespace

double estimate_sum(const SampleRelation& sample, double a) {
  if (!(a > 0.0)) throw NotIdentifiableError("degenerate sampling: a = 0, the estimator 1/a is undefined");
  double total = 0.0;
  for (auto i : lineage_order(sample)) total += sample.rows[i].f;
  return total / a;
}

SubsetValues y_sample_terms(const SampleRelation& sample) {
  const auto order = lineage_order(sample);
  SubsetValues y(sample.schema.table_size(), 0.0);
  for (std::uint32_t s = 0; s < y.size(); ++s) {
    const SubsetMask mask(s);
    std::unordered_map<std::vector<std::int64_t>, std::size_t, IdsHash> group_of;
    std::vector<const std::vector<std::int64_t>*> keys;
    std::vector<double> sums;
    for (auto i : order) {
      const auto& row = sample.rows[i];
      auto [it, inserted] = group_of.try_emplace(project(row.lineage, mask), sums.size());
      if (inserted) {
        keys.push_back(&it->first);
        sums.push_back(0.0);
      }
      sums[it->second] += row.f;
    }
    std::vector<std::size_t> groups(sums.size());
    std::iota(groups.begin(), groups.end(), std::size_t{0});
    std::sort(groups.begin(), groups.end(), [&](std::size_t x, std::size_t z) { return *keys[x] < *keys[z]; });
    double total = 0.0;
    for (auto g : groups) total += sums[g] * sums[g];
    y[s] = total;
  }
  return y;
}

SubsetValues y_unbiased(const SubsetValues& y_sample, const GusParams& g) {
  const auto& schema = g.schema();
  if (y_sample.size() != schema.table_size()) throw SchemaError("y table does not match the GUS schema");
  for (std::uint32_t s = 0; s < y_sample.size(); ++s) {
    if (g.b(SubsetMask(s)) == 0.0) {
      throw NotIdentifiableError("y_S is not identifiable: b_{" + schema.subset_key(SubsetMask(s)) +
                                 "} = 0 (no sampled pair can agree exactly on that subset)");
    }
  }
  const std::uint32_t full = schema.full_mask().bits;
  std::vector<std::uint32_t> by_size(y_sample.size());
  std::iota(by_size.begin(), by_size.end(), 0u);
  std::stable_sort(by_size.begin(), by_size.end(), [](std::uint32_t x, std::uint32_t z) {
    return __builtin_popcount(x) > __builtin_popcount(z);
  });

  SubsetValues y_hat(y_sample.size(), 0.0);
  for (auto s : by_size) {
    const std::uint32_t complement = full & ~s;
    double correction = 0.0;
    // Non-empty V ⊆ S^C, enumerated as submasks of the complement.
    for (std::uint32_t v = complement; v != 0; v = (v - 1) & complement) {
      double c_sv = 0.0;
      const int v_size = __builtin_popcount(v);
      for (std::uint32_t w = v;; w = (w - 1) & v) {
        const double sign = ((v_size - __builtin_popcount(w)) & 1) ? -1.0 : 1.0;
        c_sv += sign * g.b(SubsetMask(s | w));
        if (w == 0) break;
      }
      correction += c_sv * y_hat[s | v];
    }
    y_hat[s] = (y_sample[s] - correction) / g.b(SubsetMask(s));
  }
  return y_hat;
}

VarianceEstimate variance_estimate(const SubsetValues& y_hat, const SubsetValues& c, double a) {
  if (y_hat.size() != c.size() || y_hat.empty()) throw SchemaError("variance_estimate: table sizes differ");
  if (!(a > 0.0)) throw NotIdentifiableError("degenerate sampling: a = 0");
  double total = 0.0;
  for (std::size_t s = 0; s < c.size(); ++s) total += c[s] / (a * a) * y_hat[s];
  total -= y_hat[0];
  VarianceEstimate out;
  out.raw = total;
  out.clamped = total < 0.0;
  out.value = out.clamped ? 0.0 : total;
  return out;
}

double normal_multiplier(double level) {
  check_level(level);
  return boost::math::quantile(boost::math::normal_distribution<double>(), (1.0 + level) / 2.0);
}

double chebyshev_multiplier(double level) {
  check_level(level);
  return 1.0 / std::sqrt(1.0 - level);
}

Interval confidence_interval(double mu, double sigma, CiMethod method, double level) {
  check_level(level);
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  const double k = method == CiMethod::Normal ? normal_multiplier(level) : chebyshev_multiplier(level);
  return {mu - k * sigma, mu + k * sigma};
}

std::vector<double> quantile_bounds(double mu, double sigma, const std::vector<double>& quantiles) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  std::vector<double> out;
  out.reserve(quantiles.size());
  const boost::math::normal_distribution<double> standard;
  for (double q : quantiles) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile " + std::to_string(q) + " is not in (0, 1)");
    out.push_back(mu + boost::math::quantile(standard, q) * sigma);
  }
  return out;
}

namespace {

EstimateReport finish(EstimateReport report, const SboxOptions& options) {
  const auto var = variance_estimate(report.y_hat, report.c, report.gus.a());
  report.variance_raw = var.raw;
  report.variance_hat = var.value;
  if (var.clamped) {
    report.diagnostics.push_back("negative variance estimate " + std::to_string(var.raw) +
                                 " clamped to 0; the sample is too small for the y_S terms");
  }
  const double sigma = std::sqrt(report.variance_hat);
  report.level = options.level;
  report.ci_normal = confidence_interval(report.estimate, sigma, CiMethod::Normal, options.level);
  report.ci_chebyshev = confidence_interval(report.estimate, sigma, CiMethod::Chebyshev, options.level);
  const auto values = quantile_bounds(report.estimate, sigma, options.quantiles);
  for (std::size_t i = 0; i < values.size(); ++i) report.quantiles.emplace_back(options.quantiles[i], values[i]);
  return report;
}

EstimateReport start(const SampleRelation& sample, const GusParams& g) {
  if (!(sample.schema == g.schema())) {
    throw SchemaError("sample lineage schema does not match the GUS schema");
  }
  EstimateReport report(g);
  report.estimate = estimate_sum(sample, g.a());
  report.sample_rows = sample.size();
  report.c = c_coefficients(g);
  if (sample.empty()) report.diagnostics.push_back("empty sample: estimate and variance are 0");
  return report;
}

}  // namespace

EstimateReport run_sbox(const SampleRelation& sample, const GusParams& g, const SboxOptions& options) {
  auto report = start(sample, g);
  report.y_sample = y_sample_terms(sample);
  report.y_hat = y_unbiased(report.y_sample, g);
  return finish(std::move(report), options);
}

EstimateReport subsample_variance(const SampleRelation& sample, const GusParams& g, const LineageBernoulliSpec& spec,
                                  const SboxOptions& options) {
  auto report = start(sample, g);
  const auto sub = lineage_bernoulli(sample, spec);
  const auto sub_gus = compact(gus_of_lineage_bernoulli(spec, sample.schema), g);
  report.y_sample = y_sample_terms(sub);
  report.y_hat = y_unbiased(report.y_sample, sub_gus);
  report.subsample_rows = sub.size();
  report.subsample_gus = sub_gus;
  if (sub.empty() && !sample.empty()) {
    report.diagnostics.push_back("sub-sample is empty: the variance estimate is 0");
  }
  return finish(std::move(report), options);
}

nlohmann::json to_json(const EstimateReport& report) {
  const auto& schema = report.gus.schema();
  nlohmann::json j{
      {"estimate", report.estimate},
      {"a", report.gus.a()},
      {"gus", to_json(report.gus)},
      {"sample_rows", report.sample_rows},
      {"y_sample", subset_table_to_json(schema, report.y_sample)},
      {"y_hat", subset_table_to_json(schema, report.y_hat)},
      {"c", subset_table_to_json(schema, report.c)},
      {"variance_raw", report.variance_raw},
      {"variance_hat", report.variance_hat},
      {"level", report.level},
      {"ci_normal", {report.ci_normal.lo, report.ci_normal.hi}},
      {"ci_chebyshev", {report.ci_chebyshev.lo, report.ci_chebyshev.hi}},
      {"diagnostics", report.diagnostics},
  };
  auto quantiles = nlohmann::json::array();
  for (const auto& [q, v] : report.quantiles) quantiles.push_back({{"q", q}, {"value", v}});
  j["quantiles"] = quantiles;
  if (report.subsample_rows) {
    j["subsample"] = {{"rows", *report.subsample_rows}, {"gus", to_json(*report.subsample_gus)}};
  }
  return j;
}

}  // namespace gus
