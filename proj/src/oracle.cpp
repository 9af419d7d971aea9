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

#include "gus/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "gus/engine.hpp"
#include "gus/error.hpp"
#include "gus/hash.hpp"
#include "gus/sampling.hpp"

namespace gus {

SubsetValues exact_y_terms(const SampleRelation& full_result) {
  std::vector<const Row*> rows;
  rows.reserve(full_result.size());
  for (const auto& r : full_result.rows) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](const Row* x, const Row* y) { return x->lineage < y->lineage; });

  SubsetValues y(full_result.schema.table_size(), 0.0);
  for (std::uint32_t s = 0; s < y.size(); ++s) {
    const SubsetMask mask(s);
    std::vector<std::pair<std::vector<std::int64_t>, const Row*>> keyed;
    keyed.reserve(rows.size());
    for (const Row* r : rows) keyed.emplace_back(project(r->lineage, mask), r);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& z) { return x.first < z.first; });
    double total = 0.0;
    std::size_t i = 0;
    while (i < keyed.size()) {
      double group = 0.0;
      std::size_t j = i;
      for (; j < keyed.size() && keyed[j].first == keyed[i].first; ++j) group += keyed[j].second->f;
      total += group * group;
      i = j;
    }
    y[s] = total;
  }
  return y;
}

namespace {

struct Outcome {
  double prob;
  SampleRelation relation;
};

using Distribution = std::vector<Outcome>;

SampleRelation subset_of(const SampleRelation& input, const std::vector<bool>& keep) {
  SampleRelation out{input.schema, input.columns, {}};
  for (std::size_t i = 0; i < input.rows.size(); ++i) {
    if (keep[i]) out.rows.push_back(input.rows[i]);
  }
  return out;
}

std::string fmt_count(double count) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", count);
  return buf;
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

class Enumerator {
 public:
  Enumerator(const Catalog& catalog, std::size_t budget) : catalog_(catalog), budget_(budget) {}

  Distribution run(const PlanNode& node) {
    return std::visit(
        [&](const auto& op) -> Distribution {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, ScanOp>) {
            return {Outcome{1.0, scan(catalog_.get(op.table))}};
          } else if constexpr (std::is_same_v<T, SelectOp>) {
            auto d = run(*op.child);
            for (auto& o : d) o.relation = select(op.predicate, o.relation);
            return d;
          } else if constexpr (std::is_same_v<T, JoinOp> || std::is_same_v<T, CrossOp> ||
                               std::is_same_v<T, UnionOp>) {
            auto l = run(*op.left);
            auto r = run(*op.right);
            check(l.size() * r.size());
            Distribution out;
            out.reserve(l.size() * r.size());
            for (const auto& x : l) {
              for (const auto& y : r) {
                if constexpr (std::is_same_v<T, JoinOp>) {
                  out.push_back({x.prob * y.prob, join(op.condition, x.relation, y.relation)});
                } else if constexpr (std::is_same_v<T, CrossOp>) {
                  out.push_back({x.prob * y.prob, cross(x.relation, y.relation)});
                } else {
                  out.push_back({x.prob * y.prob, union_dedup(x.relation, y.relation)});
                }
              }
            }
            return out;
          } else if constexpr (std::is_same_v<T, SampleOp>) {
            auto d = run(*op.child);
            Distribution out;
            for (const auto& o : d) expand(op.spec, o, out);
            return out;
          } else {
            throw PlanError("enumeration supports only executable, non-aggregate nodes below the root");
          }
        },
        node.op);
  }

 private:
  void check(std::size_t outcomes) const {
    if (outcomes > budget_) too_many(std::to_string(outcomes));
  }

  //! 2^bits more outcomes on top of `out`.
  void check_pow2(std::size_t existing, std::size_t bits) const {
    if (bits >= 63) too_many("2^" + std::to_string(bits));
    check(existing + (std::size_t{1} << bits));
  }

  [[noreturn]] void too_many(const std::string& count) const {
    throw EnumerationInfeasibleError("exact enumeration needs " + count + " configurations, over the budget of " +
                                     std::to_string(budget_));
  }

  void expand(const SamplerSpec& spec, const Outcome& in, Distribution& out) const {
    const std::size_t m = in.relation.size();
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BernoulliSpec>) {
            check_pow2(out.size(), m);
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
              const int kept = __builtin_popcountll(bits);
              const double prob = std::pow(s.p, kept) * std::pow(1.0 - s.p, static_cast<double>(m) - kept);
              if (prob == 0.0) continue;
              std::vector<bool> keep(m);
              for (std::size_t i = 0; i < m; ++i) keep[i] = (bits >> i) & 1u;
              out.push_back({in.prob * prob, subset_of(in.relation, keep)});
            }
          } else if constexpr (std::is_same_v<T, WorSpec>) {
            const auto n = static_cast<std::size_t>(s.n);
            if (s.n < 0 || n > m) throw SampleSizeError("WOR sample larger than its input during enumeration");
            const double count = binomial(m, n);
            if (count > static_cast<double>(budget_)) too_many(fmt_count(count));
            check(out.size() + static_cast<std::size_t>(count));
            std::vector<bool> keep(m, false);
            std::fill(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(n), true);
            // prev_permutation over a sorted-descending mask walks every n-subset once.
            do {
              out.push_back({in.prob / count, subset_of(in.relation, keep)});
            } while (std::prev_permutation(keep.begin(), keep.end()));
          } else if constexpr (std::is_same_v<T, LineageBernoulliSpec>) {
            // One keep/drop variable per (covered relation, distinct base id).
            std::vector<std::pair<std::size_t, std::int64_t>> vars;
            std::vector<double> probs;
            for (const auto& [rel, dim] : s.dims) {
              const std::size_t k = in.relation.schema.index_of(rel);
              std::set<std::int64_t> ids;
              for (const auto& row : in.relation.rows) ids.insert(row.lineage.ids[k]);
              for (auto id : ids) {
                vars.emplace_back(k, id);
                probs.push_back(dim.p);
              }
            }
            check_pow2(out.size(), vars.size());
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits) {
              double prob = 1.0;
              for (std::size_t v = 0; v < vars.size(); ++v) prob *= ((bits >> v) & 1u) ? probs[v] : 1.0 - probs[v];
              if (prob == 0.0) continue;
              std::vector<bool> keep(m, true);
              for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t v = 0; v < vars.size(); ++v) {
                  const auto& [k, id] = vars[v];
                  if (!((bits >> v) & 1u) && in.relation.rows[i].lineage.ids[k] == id) keep[i] = false;
                }
              }
              out.push_back({in.prob * prob, subset_of(in.relation, keep)});
            }
          } else {
            throw EnumerationInfeasibleError("externally sampled inputs have no enumerable sample space");
          }
        },
        spec);
  }

  const Catalog& catalog_;
  std::size_t budget_;
};

const SumOp& require_sum(const PlanPtr& plan) {
  const auto* sum = std::get_if<SumOp>(&plan->op);
  if (!sum) throw PlanError("the estimator needs a plan with a SUM aggregate at the root");
  return *sum;
}

}  // namespace

Moments enumerate_exact_moments(const PlanPtr& plan, const Catalog& catalog, double a,
                                std::size_t max_configurations) {
  validate_plan(*plan, catalog);
  const auto& sum = require_sum(plan);
  if (!(a > 0.0)) throw NotIdentifiableError("degenerate sampling: a = 0");
  Enumerator enumerator(catalog, max_configurations);
  auto dist = enumerator.run(*sum.child);

  std::vector<std::pair<double, double>> xs;  // (prob, X)
  xs.reserve(dist.size());
  for (auto& o : dist) {
    xs.emplace_back(o.prob, sum_aggregate(sum.expr, o.relation) / a);
  }
  Moments m;
  for (const auto& [p, x] : xs) m.mean += p * x;
  for (const auto& [p, x] : xs) m.variance += p * (x - m.mean) * (x - m.mean);
  return m;
}

MonteCarloMoments monte_carlo_moments(const PlanPtr& plan, const Catalog& catalog, double a, std::size_t trials,
                                      std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("monte_carlo_moments needs at least one trial");
  require_sum(plan);
  MonteCarloMoments m;
  m.trials = trials;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double x = execute(*plan, catalog, derive_seed(seed, t)).sum / a;
    const double delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (x - mean);
  }
  m.mean = mean;
  m.variance = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  m.std_error = std::sqrt(m.variance / static_cast<double>(trials));
  return m;
}

InclusionFrequencies inclusion_probabilities(const PlanPtr& plan, const Catalog& catalog, std::size_t trials,
                                             std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("inclusion_probabilities needs at least one trial");
  std::map<Lineage, std::size_t> first;
  std::map<std::pair<Lineage, Lineage>, std::size_t> second;
  for (std::size_t t = 0; t < trials; ++t) {
    auto out = execute(*plan, catalog, derive_seed(seed, t)).relation;
    out.sort_by_lineage();
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
      ++first[out.rows[i].lineage];
      for (std::size_t j = i + 1; j < out.rows.size(); ++j) {
        ++second[{out.rows[i].lineage, out.rows[j].lineage}];
      }
    }
  }
  InclusionFrequencies freq;
  freq.trials = trials;
  const double n = static_cast<double>(trials);
  for (const auto& [l, c] : first) freq.first_order[l] = static_cast<double>(c) / n;
  for (const auto& [k, c] : second) freq.second_order[k] = static_cast<double>(c) / n;
  return freq;
}

nlohmann::json to_json(const Moments& m) { return {{"mean", m.mean}, {"variance", m.variance}}; }

nlohmann::json to_json(const MonteCarloMoments& m) {
  return {{"mean", m.mean}, {"variance", m.variance}, {"std_error", m.std_error}, {"trials", m.trials}};
}

}  // namespace gus
