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

#include "gus/engine.hpp"

#include <unordered_map>
#include <unordered_set>

#include "gus/error.hpp"
#include "gus/hash.hpp"
#include "gus/sampling.hpp"

namespace gus {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<Value>& key) const noexcept {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (const auto& v : key) {
      h = mix64(h ^ std::hash<Value>{}(v));
    }
    return static_cast<std::size_t>(h);
  }
};

struct KeyPart {
  std::size_t left;
  std::size_t right;
  bool as_double;  // mixed int/float keys compare as reals
};

Value key_value(const Value& v, bool as_double_key) {
  if (as_double_key) return as_double(v);
  return v;
}

std::vector<Column> concat_columns(const SampleRelation& left, const SampleRelation& right) {
  std::vector<Column> out = left.columns;
  for (const auto& c : right.columns) {
    for (const auto& existing : left.columns) {
      if (existing.name == c.name) {
        throw TypeError("join produces ambiguous column '" + c.name + "'");
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

SampleRelation scan(const BaseTable& table) {
  SampleRelation out;
  out.schema = LineageSchema({table.name()});
  out.columns = table.columns();
  out.rows.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    out.rows.push_back(Row{table.rows()[r], Lineage{{table.ids()[r]}}, 0.0});
  }
  return out;
}

SampleRelation select(const Predicate& predicate, const SampleRelation& input) {
  const auto bound = predicate.bind(input.columns);
  SampleRelation out{input.schema, input.columns, {}};
  for (const auto& row : input.rows) {
    if (bound.eval(row.values)) out.rows.push_back(row);
  }
  return out;
}

SampleRelation join(const JoinCondition& condition, const SampleRelation& left, const SampleRelation& right) {
  SampleRelation out;
  out.schema = merge_disjoint(left.schema, right.schema);
  out.columns = concat_columns(left, right);
  const auto residual = condition.residual.bind(out.columns);

  std::vector<KeyPart> parts;
  for (const auto& [l, r] : condition.equalities) {
    const std::size_t li = left.column_index(l);
    const std::size_t ri = right.column_index(r);
    const auto lt = left.columns[li].type;
    const auto rt = right.columns[ri].type;
    if (is_numeric(lt) != is_numeric(rt)) {
      throw TypeError("join key type mismatch: " + l + " (" + std::string(to_string(lt)) + ") = " + r + " (" +
                      std::string(to_string(rt)) + ")");
    }
    parts.push_back({li, ri, lt != rt});
  }

  auto emit = [&](const Row& lrow, const Row& rrow) {
    Row row;
    row.values = lrow.values;
    row.values.insert(row.values.end(), rrow.values.begin(), rrow.values.end());
    if (!residual.eval(row.values)) return;
    row.lineage = concat_lineage(lrow.lineage, left.schema, rrow.lineage, right.schema, out.schema);
    out.rows.push_back(std::move(row));
  };

  if (parts.empty()) {
    for (const auto& lrow : left.rows) {
      for (const auto& rrow : right.rows) emit(lrow, rrow);
    }
    return out;
  }

  std::unordered_map<std::vector<Value>, std::vector<std::size_t>, KeyHash> build;
  for (std::size_t i = 0; i < right.rows.size(); ++i) {
    std::vector<Value> key;
    for (const auto& p : parts) key.push_back(key_value(right.rows[i].values[p.right], p.as_double));
    build[std::move(key)].push_back(i);
  }
  for (const auto& lrow : left.rows) {
    std::vector<Value> key;
    for (const auto& p : parts) key.push_back(key_value(lrow.values[p.left], p.as_double));
    auto it = build.find(key);
    if (it == build.end()) continue;
    for (auto i : it->second) emit(lrow, right.rows[i]);
  }
  return out;
}

SampleRelation cross(const SampleRelation& left, const SampleRelation& right) {
  return join(JoinCondition{}, left, right);
}

SampleRelation union_dedup(const SampleRelation& left, const SampleRelation& right) {
  if (!(left.schema == right.schema)) throw SchemaError("union inputs have different lineage schemas");
  if (left.columns != right.columns) throw SchemaError("union inputs have different columns");
  SampleRelation out = left;
  std::unordered_set<Lineage, LineageHash> seen;
  for (const auto& row : left.rows) seen.insert(row.lineage);
  for (const auto& row : right.rows) {
    if (seen.insert(row.lineage).second) out.rows.push_back(row);
  }
  return out;
}

SampleRelation bind_aggregate(const Expr& expr, SampleRelation input) {
  const auto bound = expr.bind(input.columns);
  for (auto& row : input.rows) row.f = bound.eval_double(row.values);
  return input;
}

double sum_f(const SampleRelation& input) {
  double total = 0.0;
  for (const auto& row : input.rows) total += row.f;
  return total;
}

double sum_aggregate(const Expr& expr, SampleRelation& input) {
  input = bind_aggregate(expr, std::move(input));
  return sum_f(input);
}

namespace {

void validate_node(const PlanNode& node, const Catalog& catalog, bool is_root) {
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ScanOp>) {
          if (!catalog.contains(op.table)) throw PlanError("plan scans unknown table '" + op.table + "'");
        } else if constexpr (std::is_same_v<T, JoinOp> || std::is_same_v<T, CrossOp> ||
                             std::is_same_v<T, UnionOp>) {
          validate_node(*op.left, catalog, false);
          validate_node(*op.right, catalog, false);
        } else {
          if constexpr (std::is_same_v<T, GusOp>) {
            throw PlanError("GUS quasi-operators are analysis-only and cannot appear in an input plan");
          }
          if constexpr (std::is_same_v<T, SumOp>) {
            if (!is_root) throw PlanError("the SUM aggregate may only appear at the root of the plan");
          }
          if constexpr (std::is_same_v<T, SampleOp>) validate(op.spec);
          validate_node(*op.child, catalog, false);
        }
      },
      node.op);
}

class Executor {
 public:
  Executor(const Catalog& catalog, std::uint64_t seed) : catalog_(catalog), seed_(seed) {}

  SampleRelation run(const PlanNode& node) {
    return std::visit(
        [&](const auto& op) -> SampleRelation {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, ScanOp>) {
            return scan(catalog_.get(op.table));
          } else if constexpr (std::is_same_v<T, SelectOp>) {
            return select(op.predicate, run(*op.child));
          } else if constexpr (std::is_same_v<T, JoinOp>) {
            auto l = run(*op.left);
            return join(op.condition, l, run(*op.right));
          } else if constexpr (std::is_same_v<T, CrossOp>) {
            auto l = run(*op.left);
            return cross(l, run(*op.right));
          } else if constexpr (std::is_same_v<T, UnionOp>) {
            auto l = run(*op.left);
            return union_dedup(l, run(*op.right));
          } else if constexpr (std::is_same_v<T, SampleOp>) {
            const std::uint64_t ordinal = next_ordinal_++;
            return apply(op.spec, run(*op.child), ordinal);
          } else if constexpr (std::is_same_v<T, GusOp>) {
            throw PlanError("GUS quasi-operators cannot be executed");
          } else {
            throw PlanError("the SUM aggregate may only appear at the root of the plan");
          }
        },
        node.op);
  }

 private:
  SampleRelation apply(const SamplerSpec& spec, const SampleRelation& input, std::uint64_t ordinal) {
    return std::visit(
        [&](const auto& s) -> SampleRelation {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BernoulliSpec>) {
            return bernoulli_sample(input, s.p, derive_seed(seed_, derive_seed(s.seed, ordinal)));
          } else if constexpr (std::is_same_v<T, WorSpec>) {
            return wor_sample(input, s.n, derive_seed(seed_, derive_seed(s.seed, ordinal)));
          } else if constexpr (std::is_same_v<T, LineageBernoulliSpec>) {
            LineageBernoulliSpec keyed = s;
            for (auto& [rel, dim] : keyed.dims) dim.seed = derive_seed(seed_, derive_seed(dim.seed, ordinal));
            return lineage_bernoulli(input, keyed);
          } else {
            if (!(s.params.schema() == input.schema)) {
              throw SchemaError("external sample's GUS schema does not match its input's lineage schema");
            }
            return input;
          }
        },
        spec);
  }

  const Catalog& catalog_;
  std::uint64_t seed_;
  std::uint64_t next_ordinal_ = 0;
};

}  // namespace

void validate_plan(const PlanNode& root, const Catalog& catalog) {
  validate_node(root, catalog, true);
  (void)lineage_schema(root);
}

QueryOutput execute(const PlanNode& root, const Catalog& catalog, std::uint64_t seed) {
  validate_plan(root, catalog);
  Executor exec(catalog, seed);
  QueryOutput out;
  if (const auto* sum = std::get_if<SumOp>(&root.op)) {
    out.relation = exec.run(*sum->child);
    out.sum = sum_aggregate(sum->expr, out.relation);
    out.aggregated = true;
  } else {
    out.relation = exec.run(root);
  }
  return out;
}

}  // namespace gus
