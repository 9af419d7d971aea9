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

#include "gus/expr.hpp"
#include "gus/plan.hpp"
#include "gus/predicate.hpp"
#include "gus/relation.hpp"

namespace gus {

// Relational operators. All are pure functions of their inputs; output row
// order is a deterministic function of input row order.

//! One row per base row, lineage = [row id], f = 0.
SampleRelation scan(const BaseTable& table);

SampleRelation select(const Predicate& predicate, const SampleRelation& input);

//! Hash join on the equality pairs (nested loop when there are none), then
//! the residual predicate. Throws SelfJoinError when lineage schemas overlap.
SampleRelation join(const JoinCondition& condition, const SampleRelation& left, const SampleRelation& right);

SampleRelation cross(const SampleRelation& left, const SampleRelation& right);

//! Set union keyed by full lineage; rows of `left` win on overlap.
SampleRelation union_dedup(const SampleRelation& left, const SampleRelation& right);

//! Binds f(t) = expr(t) on every row.
SampleRelation bind_aggregate(const Expr& expr, SampleRelation input);

//! Binds f and returns the sum, accumulated in row order.
double sum_aggregate(const Expr& expr, SampleRelation& input);

//! Σ f over rows, accumulated in row order.
double sum_f(const SampleRelation& input);

struct QueryOutput {
  //! Rows consumed by the aggregate (f bound when the plan has a Sum root).
  SampleRelation relation;
  double sum = 0.0;
  bool aggregated = false;
};

//! Structural checks: Sum only at the root, no Gus quasi-operators, every
//! scanned table registered, join inputs with disjoint lineage.
void validate_plan(const PlanNode& root, const Catalog& catalog);

//! Executes the plan, sampling operators included. Each Sample node draws from
//! a seed derived from (seed, its spec seed, its pre-order position).
QueryOutput execute(const PlanNode& root, const Catalog& catalog, std::uint64_t seed);

}  // namespace gus
