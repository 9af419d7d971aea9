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
#include <memory>
#include <string>
#include <variant>

#include "gus/expr.hpp"
#include "gus/gus_params.hpp"
#include "gus/lineage.hpp"
#include "gus/predicate.hpp"

namespace gus {

// Sampler specifications. Seeds are salts: the executor mixes them with the
// run seed and the node's position, so one plan can be re-run per trial.

struct BernoulliSpec {
  double p;
  std::uint64_t seed = 0;
};

struct WorSpec {
  std::int64_t n;
  std::uint64_t seed = 0;
};

struct LineageBernoulliDim {
  double p;
  std::uint64_t seed = 0;
};

//! Multi-dimensional Bernoulli keyed on base-tuple ids, one (p, seed) per relation.
struct LineageBernoulliSpec {
  std::map<std::string, LineageBernoulliDim> dims;
};

//! Input already sampled outside the engine by a method described only by its
//! GUS parameters (e.g. a vendor's block-level SYSTEM sampling). Executes as a
//! pass-through; contributes `params` during rewriting.
struct ExternalSpec {
  GusParams params;
};

using SamplerSpec = std::variant<BernoulliSpec, WorSpec, LineageBernoulliSpec, ExternalSpec>;

std::string describe(const SamplerSpec& spec);

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

struct ScanOp {
  std::string table;
};
struct SelectOp {
  Predicate predicate;
  PlanPtr child;
};
struct JoinOp {
  JoinCondition condition;
  PlanPtr left;
  PlanPtr right;
};
struct CrossOp {
  PlanPtr left;
  PlanPtr right;
};
//! Set union keyed by full lineage.
struct UnionOp {
  PlanPtr left;
  PlanPtr right;
};
struct SampleOp {
  SamplerSpec spec;
  PlanPtr child;
};
//! Analysis-only quasi-operator; produced by rewriting, rejected in user plans.
struct GusOp {
  GusParams params;
  PlanPtr child;
};
struct SumOp {
  Expr expr;
  PlanPtr child;
};

struct PlanNode {
  std::variant<ScanOp, SelectOp, JoinOp, CrossOp, UnionOp, SampleOp, GusOp, SumOp> op;
};

namespace plan {

PlanPtr scan(std::string table);
PlanPtr select(Predicate predicate, PlanPtr child);
PlanPtr join(JoinCondition condition, PlanPtr left, PlanPtr right);
PlanPtr cross(PlanPtr left, PlanPtr right);
PlanPtr union_dedup(PlanPtr left, PlanPtr right);
PlanPtr sample(SamplerSpec spec, PlanPtr child);
PlanPtr gus(GusParams params, PlanPtr child);
PlanPtr sum(Expr expr, PlanPtr child);

}  // namespace plan

//! Base relations scanned below `node`. Throws SelfJoinError when a join or
//! cross product combines inputs that share a base relation.
LineageSchema lineage_schema(const PlanNode& node);

//! True if any Sample node occurs in the subtree.
bool contains_sampling(const PlanNode& node);

//! Structural equality of two sampling-free plans.
bool same_relational_plan(const PlanNode& a, const PlanNode& b);

//! The plan with every Sample and Gus node removed.
PlanPtr strip_sampling(const PlanPtr& node);

//! Indented one-node-per-line rendering.
std::string describe(const PlanNode& node);

}  // namespace gus
