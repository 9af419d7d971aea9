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

#include "gus/algebra.hpp"

#include <optional>

#include "gus/engine.hpp"
#include "gus/error.hpp"

namespace gus {

namespace {

//! a and b for "two distinct rows" / "same row" cases of a row-level sampler.
GusParams row_level(double a, double b_distinct, const LineageSchema& schema) {
  SubsetValues b(schema.table_size(), b_distinct);
  b[schema.full_mask().bits] = a;
  return GusParams(schema, a, std::move(b));
}

void require_same_schema(const GusParams& g1, const GusParams& g2, const char* op) {
  if (!(g1.schema() == g2.schema())) {
    throw SchemaError(std::string(op) + ": GUS schemas differ (use extend_schema first)");
  }
}

}  // namespace

GusParams gus_of_bernoulli(double p, const LineageSchema& schema) {
  if (!(p >= 0.0 && p <= 1.0)) throw SampleSizeError("Bernoulli p = " + std::to_string(p) + " is outside [0, 1]");
  return row_level(p, p * p, schema);
}

GusParams gus_of_bernoulli(double p, const std::string& relation) {
  return gus_of_bernoulli(p, LineageSchema({relation}));
}

GusParams gus_of_wor(std::int64_t n, std::int64_t big_n, const LineageSchema& schema) {
  if (big_n <= 0) throw SampleSizeError("WOR over an empty relation (N = 0)");
  if (n < 0 || n > big_n) {
    throw SampleSizeError("WOR sample size n = " + std::to_string(n) + " exceeds N = " + std::to_string(big_n));
  }
  const double nn = static_cast<double>(n);
  const double bn = static_cast<double>(big_n);
  // n == N keeps everything; spelled out so a single-row table also gives (1, 1̄).
  const double pair = n == big_n ? 1.0 : (nn * (nn - 1.0)) / (bn * (bn - 1.0));
  return row_level(nn / bn, pair, schema);
}

GusParams gus_of_wor(std::int64_t n, std::int64_t big_n, const std::string& relation) {
  return gus_of_wor(n, big_n, LineageSchema({relation}));
}

GusParams gus_of_lineage_bernoulli(const LineageBernoulliSpec& spec, const LineageSchema& over) {
  std::optional<GusParams> acc;
  for (const auto& [rel, dim] : spec.dims) {
    if (!over.contains(rel)) {
      throw SchemaError("lineage_bernoulli: relation '" + rel + "' is not in the input's lineage schema");
    }
    auto g = gus_of_bernoulli(dim.p, rel);
    acc = acc ? compose(*acc, g) : g;
  }
  if (!acc) return identity_gus(over);
  return extend_schema(*acc, over);
}

GusParams identity_gus(const LineageSchema& schema) {
  return GusParams(schema, 1.0, SubsetValues(schema.table_size(), 1.0));
}

GusParams null_gus(const LineageSchema& schema) {
  return GusParams(schema, 0.0, SubsetValues(schema.table_size(), 0.0));
}

GusParams join_merge(const GusParams& g1, const GusParams& g2) {
  const auto merged = merge_disjoint(g1.schema(), g2.schema());
  SubsetValues b(merged.table_size());
  for (std::uint32_t t = 0; t < b.size(); ++t) {
    const SubsetMask mask(t);
    b[t] = g1.b(g1.schema().restrict_from(mask, merged)) * g2.b(g2.schema().restrict_from(mask, merged));
  }
  return GusParams(merged, g1.a() * g2.a(), std::move(b));
}

GusParams compose(const GusParams& g1, const GusParams& g2) { return join_merge(g1, g2); }

GusParams union_merge(const GusParams& g1, const GusParams& g2) {
  require_same_schema(g1, g2, "union_merge");
  const double a1 = g1.a();
  const double a2 = g2.a();
  const double a = a1 + a2 - a1 * a2;
  SubsetValues b(g1.schema().table_size());
  for (std::uint32_t t = 0; t < b.size(); ++t) {
    // (1 - 2a_i + b_iT) is the probability that neither tuple survives G_i.
    const double none1 = 1.0 - 2.0 * a1 + g1.b(SubsetMask(t));
    const double none2 = 1.0 - 2.0 * a2 + g2.b(SubsetMask(t));
    b[t] = clamp_probability(2.0 * a - 1.0 + none1 * none2, "union b_T");
  }
  b[g1.schema().full_mask().bits] = a;
  return GusParams(g1.schema(), a, std::move(b));
}

GusParams compact(const GusParams& g1, const GusParams& g2) {
  require_same_schema(g1, g2, "compact");
  SubsetValues b(g1.schema().table_size());
  for (std::uint32_t t = 0; t < b.size(); ++t) b[t] = g1.b(SubsetMask(t)) * g2.b(SubsetMask(t));
  return GusParams(g1.schema(), g1.a() * g2.a(), std::move(b));
}

SubsetValues c_coefficients(const GusParams& g) {
  SubsetValues c(g.b_table().begin(), g.b_table().end());
  const std::size_t n = g.schema().size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t m = 0; m < c.size(); ++m) {
      if (m & bit) c[m] -= c[m ^ bit];
    }
  }
  return c;
}

nlohmann::json to_json(const RewriteStep& step) {
  auto before = nlohmann::json::array();
  for (const auto& g : step.before) before.push_back(to_json(g));
  return {{"rule", step.rule}, {"detail", step.detail}, {"before", before}, {"after", to_json(step.after)}};
}

namespace {

class Normalizer {
 public:
  explicit Normalizer(const Catalog& catalog) : catalog_(catalog) {}

  struct Result {
    PlanPtr relational;
    std::optional<GusParams> gus;
  };

  Result run(const PlanPtr& node) {
    return std::visit(
        [&](const auto& op) -> Result {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, ScanOp>) {
            return {node, std::nullopt};
          } else if constexpr (std::is_same_v<T, SelectOp>) {
            // σ_C(G(R)) ≡ G(σ_C(R)) with unchanged parameters.
            auto child = run(op.child);
            return {plan::select(op.predicate, child.relational), child.gus};
          } else if constexpr (std::is_same_v<T, JoinOp> || std::is_same_v<T, CrossOp>) {
            auto l = run(op.left);
            auto r = run(op.right);
            PlanPtr rel;
            if constexpr (std::is_same_v<T, JoinOp>) {
              rel = plan::join(op.condition, l.relational, r.relational);
            } else {
              rel = plan::cross(l.relational, r.relational);
            }
            if (!l.gus && !r.gus) return {rel, std::nullopt};
            auto gl = l.gus ? *l.gus : insert_identity(*l.relational);
            auto gr = r.gus ? *r.gus : insert_identity(*r.relational);
            auto merged = join_merge(gl, gr);
            trace.push_back({"join-merge", "", {gl, gr}, merged});
            return {rel, merged};
          } else if constexpr (std::is_same_v<T, UnionOp>) {
            auto l = run(op.left);
            auto r = run(op.right);
            if (!same_relational_plan(*l.relational, *r.relational)) {
              throw PlanError(
                  "union of samples needs both inputs to sample the same relational expression; "
                  "got different inputs");
            }
            auto rel = l.relational;
            if (!l.gus && !r.gus) return {rel, std::nullopt};
            auto gl = l.gus ? *l.gus : insert_identity(*l.relational);
            auto gr = r.gus ? *r.gus : insert_identity(*r.relational);
            auto merged = union_merge(gl, gr);
            trace.push_back({"union-merge", "", {gl, gr}, merged});
            return {rel, merged};
          } else if constexpr (std::is_same_v<T, SampleOp>) {
            auto child = run(op.child);
            auto g = translate(op.spec, child);
            trace.push_back({"sample-to-gus", describe(op.spec), {}, g});
            if (!child.gus) return {child.relational, g};
            auto stacked = compact(g, *child.gus);
            trace.push_back({"compaction", "", {g, *child.gus}, stacked});
            return {child.relational, stacked};
          } else if constexpr (std::is_same_v<T, GusOp>) {
            throw PlanError("input plans may not contain GUS quasi-operators");
          } else {
            auto child = run(op.child);
            return {plan::sum(op.expr, child.relational), child.gus};
          }
        },
        node->op);
  }

  GusParams insert_identity(const PlanNode& unsampled) {
    auto g = identity_gus(lineage_schema(unsampled));
    trace.push_back({"identity-insert", "", {}, g});
    return g;
  }

  std::vector<RewriteStep> trace;

 private:
  GusParams translate(const SamplerSpec& spec, const Result& child) {
    const auto schema = lineage_schema(*child.relational);
    return std::visit(
        [&](const auto& s) -> GusParams {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BernoulliSpec>) {
            return gus_of_bernoulli(s.p, schema);
          } else if constexpr (std::is_same_v<T, WorSpec>) {
            if (child.gus) {
              throw PlanError("WOR over an already-sampled input has a random population size and is not a GUS");
            }
            const auto big_n = static_cast<std::int64_t>(execute(*child.relational, catalog_, 0).relation.size());
            return gus_of_wor(s.n, big_n, schema);
          } else if constexpr (std::is_same_v<T, LineageBernoulliSpec>) {
            return gus_of_lineage_bernoulli(s, schema);
          } else {
            if (!(s.params.schema() == schema)) {
              throw SchemaError("external sample's GUS schema does not match its input's lineage schema");
            }
            return s.params;
          }
        },
        spec);
  }

  const Catalog& catalog_;
};

}  // namespace

NormalizedPlan normalize_plan(const PlanPtr& plan, const Catalog& catalog) {
  validate_plan(*plan, catalog);
  Normalizer normalizer(catalog);
  auto result = normalizer.run(plan);
  if (!result.gus) result.gus = normalizer.insert_identity(*result.relational);
  return NormalizedPlan{result.relational, *result.gus, std::move(normalizer.trace)};
}

}  // namespace gus
