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

#include "gus/plan.hpp"

#include <sstream>

#include "gus/error.hpp"

namespace gus {

namespace plan {

namespace {
PlanPtr make(auto op) { return std::make_shared<const PlanNode>(PlanNode{std::move(op)}); }
}  // namespace

PlanPtr scan(std::string table) { return make(ScanOp{std::move(table)}); }
PlanPtr select(Predicate predicate, PlanPtr child) { return make(SelectOp{std::move(predicate), std::move(child)}); }
PlanPtr join(JoinCondition condition, PlanPtr left, PlanPtr right) {
  return make(JoinOp{std::move(condition), std::move(left), std::move(right)});
}
PlanPtr cross(PlanPtr left, PlanPtr right) { return make(CrossOp{std::move(left), std::move(right)}); }
PlanPtr union_dedup(PlanPtr left, PlanPtr right) { return make(UnionOp{std::move(left), std::move(right)}); }
PlanPtr sample(SamplerSpec spec, PlanPtr child) { return make(SampleOp{std::move(spec), std::move(child)}); }
PlanPtr gus(GusParams params, PlanPtr child) { return make(GusOp{std::move(params), std::move(child)}); }
PlanPtr sum(Expr expr, PlanPtr child) { return make(SumOp{std::move(expr), std::move(child)}); }

}  // namespace plan

std::string describe(const SamplerSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BernoulliSpec>) {
          os << "Bernoulli(p=" << s.p << ")";
        } else if constexpr (std::is_same_v<T, WorSpec>) {
          os << "WOR(n=" << s.n << ")";
        } else if constexpr (std::is_same_v<T, LineageBernoulliSpec>) {
          os << "LineageBernoulli(";
          bool first = true;
          for (const auto& [rel, dim] : s.dims) {
            os << (first ? "" : ", ") << rel << "=" << dim.p;
            first = false;
          }
          os << ")";
        } else {
          os << "External(a=" << s.params.a() << ")";
        }
      },
      spec);
  return os.str();
}

LineageSchema lineage_schema(const PlanNode& node) {
  return std::visit(
      [](const auto& op) -> LineageSchema {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ScanOp>) {
          return LineageSchema({op.table});
        } else if constexpr (std::is_same_v<T, JoinOp> || std::is_same_v<T, CrossOp>) {
          return merge_disjoint(lineage_schema(*op.left), lineage_schema(*op.right));
        } else if constexpr (std::is_same_v<T, UnionOp>) {
          auto left = lineage_schema(*op.left);
          if (!(left == lineage_schema(*op.right))) {
            throw SchemaError("union inputs have different lineage schemas");
          }
          return left;
        } else {
          return lineage_schema(*op.child);
        }
      },
      node.op);
}

bool contains_sampling(const PlanNode& node) {
  return std::visit(
      [](const auto& op) -> bool {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ScanOp>) {
          return false;
        } else if constexpr (std::is_same_v<T, SampleOp> || std::is_same_v<T, GusOp>) {
          return true;
        } else if constexpr (std::is_same_v<T, JoinOp> || std::is_same_v<T, CrossOp> ||
                             std::is_same_v<T, UnionOp>) {
          return contains_sampling(*op.left) || contains_sampling(*op.right);
        } else {
          return contains_sampling(*op.child);
        }
      },
      node.op);
}

namespace {

bool same_predicate(const Predicate& a, const Predicate& b) { return a.describe() == b.describe(); }

}  // namespace

bool same_relational_plan(const PlanNode& a, const PlanNode& b) {
  if (a.op.index() != b.op.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.op);
        if constexpr (std::is_same_v<T, ScanOp>) {
          return x.table == y.table;
        } else if constexpr (std::is_same_v<T, SelectOp>) {
          return same_predicate(x.predicate, y.predicate) && same_relational_plan(*x.child, *y.child);
        } else if constexpr (std::is_same_v<T, JoinOp>) {
          return x.condition.describe() == y.condition.describe() && same_relational_plan(*x.left, *y.left) &&
                 same_relational_plan(*x.right, *y.right);
        } else if constexpr (std::is_same_v<T, CrossOp> || std::is_same_v<T, UnionOp>) {
          return same_relational_plan(*x.left, *y.left) && same_relational_plan(*x.right, *y.right);
        } else if constexpr (std::is_same_v<T, SumOp>) {
          return x.expr.text() == y.expr.text() && same_relational_plan(*x.child, *y.child);
        } else {
          return false;  // sampling nodes are never "relational"
        }
      },
      a.op);
}

PlanPtr strip_sampling(const PlanPtr& node) {
  return std::visit(
      [&](const auto& op) -> PlanPtr {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ScanOp>) {
          return node;
        } else if constexpr (std::is_same_v<T, SampleOp> || std::is_same_v<T, GusOp>) {
          return strip_sampling(op.child);
        } else if constexpr (std::is_same_v<T, SelectOp>) {
          return plan::select(op.predicate, strip_sampling(op.child));
        } else if constexpr (std::is_same_v<T, JoinOp>) {
          return plan::join(op.condition, strip_sampling(op.left), strip_sampling(op.right));
        } else if constexpr (std::is_same_v<T, CrossOp>) {
          return plan::cross(strip_sampling(op.left), strip_sampling(op.right));
        } else if constexpr (std::is_same_v<T, UnionOp>) {
          return plan::union_dedup(strip_sampling(op.left), strip_sampling(op.right));
        } else {
          return plan::sum(op.expr, strip_sampling(op.child));
        }
      },
      node->op);
}

namespace {

void render(const PlanNode& node, int depth, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ');
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ScanOp>) {
          os << "Scan(" << op.table << ")\n";
        } else if constexpr (std::is_same_v<T, SelectOp>) {
          os << "Select(" << op.predicate.describe() << ")\n";
          render(*op.child, depth + 1, os);
        } else if constexpr (std::is_same_v<T, JoinOp>) {
          os << "Join(" << op.condition.describe() << ")\n";
          render(*op.left, depth + 1, os);
          render(*op.right, depth + 1, os);
        } else if constexpr (std::is_same_v<T, CrossOp>) {
          os << "Cross\n";
          render(*op.left, depth + 1, os);
          render(*op.right, depth + 1, os);
        } else if constexpr (std::is_same_v<T, UnionOp>) {
          os << "Union\n";
          render(*op.left, depth + 1, os);
          render(*op.right, depth + 1, os);
        } else if constexpr (std::is_same_v<T, SampleOp>) {
          os << "Sample(" << describe(op.spec) << ")\n";
          render(*op.child, depth + 1, os);
        } else if constexpr (std::is_same_v<T, GusOp>) {
          os << "GUS(a=" << op.params.a() << ")\n";
          render(*op.child, depth + 1, os);
        } else {
          os << "Sum(" << op.expr.text() << ")\n";
          render(*op.child, depth + 1, os);
        }
      },
      node.op);
}

}  // namespace

std::string describe(const PlanNode& node) {
  std::ostringstream os;
  render(node, 0, os);
  return os.str();
}

}  // namespace gus
