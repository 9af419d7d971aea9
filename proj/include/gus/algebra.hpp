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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gus/gus_params.hpp"
#include "gus/plan.hpp"
#include "gus/relation.hpp"

namespace gus {

// Translation of concrete samplers into GUS parameters. The schema overloads
// describe the sampler applied to an intermediate relation with that lineage:
// two distinct rows are then "different" unless they agree everywhere.

//! a = p, b_T = p^2 for T != full, b_full = p.
GusParams gus_of_bernoulli(double p, const LineageSchema& schema);
GusParams gus_of_bernoulli(double p, const std::string& relation);

//! a = n/N, b_T = n(n-1)/(N(N-1)) for T != full, b_full = n/N.
//! Throws SampleSizeError for n < 0, n > N or N = 0.
GusParams gus_of_wor(std::int64_t n, std::int64_t big_n, const LineageSchema& schema);
GusParams gus_of_wor(std::int64_t n, std::int64_t big_n, const std::string& relation);

//! Composition of per-relation Bernoulli filters, widened to `over`.
GusParams gus_of_lineage_bernoulli(const LineageBernoulliSpec& spec, const LineageSchema& over);

//! (1, 1̄): never filters. Null element of compaction.
GusParams identity_gus(const LineageSchema& schema);
//! (0, 0̄): filters everything. Null element of union.
GusParams null_gus(const LineageSchema& schema);

//! GUS of G1(R1) ⋈ G2(R2) pushed above the join: a = a1 a2, b_T = b1_{T∩L1} b2_{T∩L2}.
//! Throws SelfJoinError when the schemas overlap.
GusParams join_merge(const GusParams& g1, const GusParams& g2);

//! Independent G1(R) ∪ G2(R): a = a1 + a2 - a1 a2,
//! b_T = 2a - 1 + (1 - 2a1 + b1_T)(1 - 2a2 + b2_T). Schemas must be identical.
GusParams union_merge(const GusParams& g1, const GusParams& g2);

//! Stacked independent filters G1(G2(R)): a = a1 a2, b_T = b1_T b2_T.
GusParams compact(const GusParams& g1, const GusParams& g2);

//! Multi-dimensional sampler built from samplers over disjoint relations.
//! Same arithmetic as join_merge.
GusParams compose(const GusParams& g1, const GusParams& g2);

//! c_S = Σ_{T ⊆ S} (-1)^{|S|-|T|} b_T (Möbius inversion on the subset lattice).
SubsetValues c_coefficients(const GusParams& g);

//! One rewrite applied while pushing GUS quasi-operators to the top.
struct RewriteStep {
  std::string rule;  // sample-to-gus | identity-insert | join-merge | union-merge | compaction
  std::string detail;
  std::vector<GusParams> before;
  GusParams after;
};

nlohmann::json to_json(const RewriteStep& step);

struct NormalizedPlan {
  //! The input plan with every sampling operator removed.
  PlanPtr relational;
  //! The single GUS covering the full lineage schema, just below the aggregate.
  GusParams top;
  std::vector<RewriteStep> trace;
};

//! Rewrites a plan with interspersed samplers into relational plan + one top GUS.
//! Selections commute with GUS unchanged; joins merge; unsampled join/union
//! inputs get an identity GUS; stacked samplers compact. WOR needs the size of
//! its (sampling-free) input, which is read from `catalog`.
NormalizedPlan normalize_plan(const PlanPtr& plan, const Catalog& catalog);

}  // namespace gus
