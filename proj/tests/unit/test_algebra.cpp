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

#include <doctest.h>

#include "fixtures.hpp"
#include "gus/engine.hpp"
#include "gus/error.hpp"
#include "gus/oracle.hpp"

using namespace gus;
using testing::matches_printed;

namespace {

double b(const GusParams& g, std::initializer_list<std::string> names) {
  return g.b(g.schema().mask_of(std::vector<std::string>(names)));
}

GusParams g12() { return join_merge(gus_of_bernoulli(0.1, "l"), gus_of_wor(1000, 150000, "o")); }

}  // namespace

TEST_CASE("gus_of_bernoulli") {
  const auto g = gus_of_bernoulli(0.1, "l");
  CHECK(g.a() == 0.1);
  CHECK(b(g, {}) == doctest::Approx(0.01));
  CHECK(b(g, {"l"}) == 0.1);
  CHECK(gus_of_bernoulli(1.0, "l") == identity_gus(LineageSchema({"l"})));
  const auto half = gus_of_bernoulli(0.5, "p");
  CHECK(half.a() == 0.5);
  CHECK(b(half, {}) == 0.25);
  CHECK(b(half, {"p"}) == 0.5);
  CHECK_THROWS_AS(gus_of_bernoulli(-0.1, "l"), SampleSizeError);
}

TEST_CASE("gus_of_wor") {
  const auto g = gus_of_wor(1000, 150000, "o");
  CHECK(matches_printed(g.a(), 6.667e-3));
  CHECK(matches_printed(b(g, {}), 4.44e-5));
  CHECK(matches_printed(b(g, {"o"}), 6.667e-3));
  CHECK(gus_of_wor(7, 7, "o") == identity_gus(LineageSchema({"o"})));
  CHECK(gus_of_wor(1, 1, "o") == identity_gus(LineageSchema({"o"})));
  CHECK(b(gus_of_wor(1, 10, "o"), {}) == 0.0);
  CHECK_THROWS_AS(gus_of_wor(11, 10, "o"), SampleSizeError);
  CHECK_THROWS_AS(gus_of_wor(0, 0, "o"), SampleSizeError);
}

TEST_CASE("identity_gus") {
  const auto id = identity_gus(LineageSchema({"c"}));
  CHECK(id.a() == 1.0);
  CHECK(id.b_table().size() == 2);
  for (double v : id.b_table()) CHECK(v == 1.0);

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto g = testing::random_dyadic_gus(LineageSchema({"l", "o"}), rng);
    CHECK(compact(identity_gus(g.schema()), g) == g);
    const auto merged = join_merge(g, identity_gus(LineageSchema({"c"})));
    CHECK(merged.a() == g.a());
    for (std::uint32_t t = 0; t < g.schema().table_size(); ++t) {
      const auto wide = g.schema().embed(SubsetMask(t), merged.schema());
      const auto c_bit = merged.schema().mask_of({"c"});
      CHECK(merged.b(wide) == g.b(SubsetMask(t)));
      CHECK(merged.b(wide | c_bit) == g.b(SubsetMask(t)));
    }
  }
}

TEST_CASE("join_merge reproduces the Query 1 coefficients") {
  const auto g = g12();
  CHECK(matches_printed(g.a(), 6.667e-4));
  CHECK(matches_printed(b(g, {}), 4.44e-7));
  CHECK(matches_printed(b(g, {"o"}), 6.667e-5));
  CHECK(matches_printed(b(g, {"l"}), 4.44e-6));
  CHECK(matches_printed(b(g, {"l", "o"}), 6.667e-4));
  CHECK_THROWS_AS(join_merge(g, gus_of_bernoulli(0.5, "l")), SelfJoinError);
}

TEST_CASE("join_merge with identity and a third sampler gives the four-relation tables") {
  const auto g121 = join_merge(g12(), identity_gus(LineageSchema({"c"})));
  CHECK(matches_printed(b(g121, {"o", "c"}), 6.667e-5));
  CHECK(matches_printed(b(g121, {"c"}), 4.44e-7));
  CHECK(matches_printed(b(g121, {"l", "o", "c"}), 6.667e-4));

  const auto g123 = join_merge(g121, gus_of_bernoulli(0.5, "p"));
  CHECK(matches_printed(g123.a(), 3.334e-4));
  CHECK(matches_printed(b(g123, {"l", "o", "c", "p"}), 3.334e-4));
  CHECK(matches_printed(b(g123, {"o", "p"}), 3.335e-5));
}

TEST_CASE("union_merge") {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto g = testing::random_dyadic_gus(LineageSchema({"r"}), rng);
    CHECK(union_merge(g, null_gus(g.schema())) == g);
  }
  const auto u = union_merge(gus_of_bernoulli(0.5, "r"), gus_of_bernoulli(0.5, "r"));
  CHECK(u == gus_of_bernoulli(0.75, "r"));
  CHECK(b(u, {}) == u.a() * u.a());
  const auto id = identity_gus(LineageSchema({"r"}));
  CHECK(union_merge(id, id) == id);
  CHECK_THROWS_AS(union_merge(id, identity_gus(LineageSchema({"s"}))), SchemaError);
}

TEST_CASE("compact") {
  const auto g = compact(gus_of_bernoulli(0.2, "r"), gus_of_bernoulli(0.3, "r"));
  CHECK(g.a() == doctest::Approx(0.06));
  CHECK(b(g, {}) == doctest::Approx(0.0036));
  CHECK(b(g, {"r"}) == doctest::Approx(0.06));
  const auto q = gus_of_bernoulli(0.3, "r");
  CHECK(compact(q, identity_gus(q.schema())) == q);
  CHECK(compact(q, null_gus(q.schema())) == null_gus(q.schema()));
}

TEST_CASE("compact matches the exact moments of stacked Bernoulli samplers") {
  Catalog cat;
  cat.add(testing::keyed_table("r", "r", {{1, 1.0}, {2, -2.0}, {3, 4.5}, {4, 0.5}}));
  const auto q = plan::sum(Expr::parse("r_v"), plan::sample(BernoulliSpec{0.2, 1},
                                                            plan::sample(BernoulliSpec{0.3, 2}, plan::scan("r"))));
  const auto g = normalize_plan(q, cat).top;
  CHECK(g.a() == doctest::Approx(0.06));
  const auto full = execute(*strip_sampling(q), cat, 0);
  const auto y = exact_y_terms(full.relation);
  const auto c = c_coefficients(g);
  const double var = c[0] / (g.a() * g.a()) * y[0] + c[1] / (g.a() * g.a()) * y[1] - y[0];
  CHECK(testing::close_rel(var, enumerate_exact_moments(q, cat, g.a()).variance, 1e-9));
}

TEST_CASE("compose") {
  const auto g = compose(gus_of_bernoulli(0.2, "l"), gus_of_bernoulli(0.3, "o"));
  CHECK(g.a() == doctest::Approx(0.06));
  CHECK(b(g, {}) == doctest::Approx(0.0036));
  CHECK(b(g, {"o"}) == doctest::Approx(0.012));
  CHECK(b(g, {"l"}) == doctest::Approx(0.018));
  CHECK(b(g, {"l", "o"}) == doctest::Approx(0.06));

  const auto q = gus_of_bernoulli(0.3, "l");
  CHECK(compose(q, identity_gus(LineageSchema({"c"}))) == extend_schema(q, LineageSchema({"c", "l"})));

  const auto g123 = compact(g, g12());
  CHECK(matches_printed(g123.a(), 4e-5));
  CHECK(matches_printed(b(g123, {}), 1.598e-9));
  CHECK(matches_printed(b(g123, {"o"}), 8e-7));
  CHECK(matches_printed(b(g123, {"l"}), 7.992e-8));
  CHECK(matches_printed(b(g123, {"l", "o"}), 4e-5));
}

TEST_CASE("gus_of_lineage_bernoulli") {
  LineageBernoulliSpec spec{{{"l", {0.2, 1}}, {"o", {0.3, 2}}}};
  const LineageSchema lo({"l", "o"});
  CHECK(gus_of_lineage_bernoulli(spec, lo) == compose(gus_of_bernoulli(0.2, "l"), gus_of_bernoulli(0.3, "o")));
  const LineageSchema loc({"c", "l", "o"});
  CHECK(gus_of_lineage_bernoulli(spec, loc).schema() == loc);
  CHECK_THROWS_AS(gus_of_lineage_bernoulli(LineageBernoulliSpec{{{"x", {0.5, 0}}}}, lo), SchemaError);
}

TEST_CASE("c_coefficients") {
  const double p = 0.3;
  const auto c = c_coefficients(gus_of_bernoulli(p, "r"));
  CHECK(c[0] == doctest::Approx(p * p));
  CHECK(c[1] == doctest::Approx(p - p * p));

  const auto ci = c_coefficients(identity_gus(LineageSchema({"l", "o"})));
  CHECK(ci[0] == 1.0);
  for (std::size_t s = 1; s < ci.size(); ++s) CHECK(ci[s] == 0.0);

  // Brute-force alternating sum on a random 3-relation table.
  Rng rng(4);
  const auto g = testing::random_dyadic_gus(LineageSchema({"c", "l", "o"}), rng);
  const auto fast = c_coefficients(g);
  for (std::uint32_t s = 0; s < 8; ++s) {
    double slow = 0.0;
    for (std::uint32_t t = 0; t < 8; ++t) {
      if ((t & ~s) != 0) continue;
      slow += (((__builtin_popcount(s) - __builtin_popcount(t)) & 1) ? -1.0 : 1.0) * g.b(SubsetMask(t));
    }
    CHECK(fast[s] == doctest::Approx(slow));
  }
}

TEST_CASE("normalize_plan") {
  Catalog cat;
  cat.add(testing::keyed_table("l", "l", {{1, 1.0}, {2, 2.0}, {3, 3.0}}));
  cat.add(testing::keyed_table("o", "o", {{1, 1.0}, {2, 2.0}}));
  cat.add(testing::keyed_table("c", "c", {{1, 1.0}}));
  cat.add(testing::keyed_table("p", "p", {{1, 1.0}, {2, 1.0}}));
  const JoinCondition lo{{{"l_k", "o_k"}}, {}};

  SUBCASE("Query 1 shape") {
    const auto q = plan::sum(
        Expr::parse("l_v"),
        plan::select(Predicate{{ColumnConstAtom{"l_v", CmpOp::Gt, 1.0}}},
                     plan::join(lo, plan::sample(BernoulliSpec{0.1, 1}, plan::scan("l")),
                                plan::sample(WorSpec{1, 2}, plan::scan("o")))));
    const auto n = normalize_plan(q, cat);
    CHECK(n.top == join_merge(gus_of_bernoulli(0.1, "l"), gus_of_wor(1, 2, "o")));
    CHECK_FALSE(contains_sampling(*n.relational));
    REQUIRE(n.trace.size() == 3);
    CHECK(n.trace[0].rule == "sample-to-gus");
    CHECK(n.trace[1].rule == "sample-to-gus");
    CHECK(n.trace[2].rule == "join-merge");
    CHECK(n.trace[2].after == n.top);
  }
  SUBCASE("four relations") {
    const auto q = plan::sum(
        Expr::parse("l_v"),
        plan::join(JoinCondition{{{"l_k", "p_k"}}, {}},
                   plan::join(JoinCondition{{{"o_k", "c_k"}}, {}},
                              plan::join(lo, plan::sample(BernoulliSpec{0.1, 1}, plan::scan("l")),
                                         plan::sample(WorSpec{1, 2}, plan::scan("o"))),
                              plan::scan("c")),
                   plan::sample(BernoulliSpec{0.5, 3}, plan::scan("p"))));
    const auto n = normalize_plan(q, cat);
    const auto expected = join_merge(join_merge(join_merge(gus_of_bernoulli(0.1, "l"), gus_of_wor(1, 2, "o")),
                                                identity_gus(LineageSchema({"c"}))),
                                     gus_of_bernoulli(0.5, "p"));
    CHECK(n.top == expected);
    std::vector<std::string> rules;
    for (const auto& s : n.trace) rules.push_back(s.rule);
    CHECK(rules == std::vector<std::string>{"sample-to-gus", "sample-to-gus", "join-merge", "identity-insert",
                                            "join-merge", "sample-to-gus", "join-merge"});
  }
  SUBCASE("no sampling") {
    const auto q = plan::sum(Expr::parse("l_v"), plan::join(lo, plan::scan("l"), plan::scan("o")));
    CHECK(normalize_plan(q, cat).top == identity_gus(LineageSchema({"l", "o"})));
  }
  SUBCASE("stacked samplers compact") {
    const auto q = plan::sample(BernoulliSpec{0.5, 1}, plan::sample(BernoulliSpec{0.5, 2}, plan::scan("l")));
    const auto n = normalize_plan(q, cat);
    CHECK(n.top == gus_of_bernoulli(0.25, "l"));
    CHECK(n.trace.back().rule == "compaction");
  }
  SUBCASE("union of two samples of one relation") {
    const auto q = plan::union_dedup(plan::sample(BernoulliSpec{0.5, 1}, plan::scan("l")),
                                     plan::sample(BernoulliSpec{0.5, 2}, plan::scan("l")));
    const auto n = normalize_plan(q, cat);
    CHECK(n.top == gus_of_bernoulli(0.75, "l"));
    CHECK(n.trace.back().rule == "union-merge");
  }
  SUBCASE("WOR population size comes from the data below the sampler") {
    const auto q = plan::sample(WorSpec{2, 1}, plan::select(Predicate{{ColumnConstAtom{"l_v", CmpOp::Ge, 2.0}}},
                                                            plan::scan("l")));
    CHECK(normalize_plan(q, cat).top == gus_of_wor(2, 2, "l"));
  }
  SUBCASE("rejected plans") {
    const auto wor_on_sample =
        plan::sample(WorSpec{1, 1}, plan::sample(BernoulliSpec{0.5, 2}, plan::scan("l")));
    CHECK_THROWS_AS(normalize_plan(wor_on_sample, cat), PlanError);
    const auto mismatched_union = plan::union_dedup(
        plan::sample(BernoulliSpec{0.5, 1}, plan::scan("l")),
        plan::sample(BernoulliSpec{0.5, 2}, plan::select(Predicate::always_true(), plan::scan("l"))));
    CHECK_THROWS_AS(normalize_plan(mismatched_union, cat), PlanError);
    CHECK_THROWS_AS(normalize_plan(plan::gus(identity_gus(LineageSchema({"l"})), plan::scan("l")), cat), PlanError);
    CHECK_THROWS_AS(normalize_plan(plan::cross(plan::scan("l"), plan::scan("l")), cat), SelfJoinError);
  }
}

TEST_CASE("rewrite steps serialize") {
  const RewriteStep step{"join-merge", "", {gus_of_bernoulli(0.1, "l"), gus_of_bernoulli(0.2, "o")}, g12()};
  const auto j = to_json(step);
  CHECK(j["rule"] == "join-merge");
  CHECK(j["before"].size() == 2);
  CHECK(j["after"]["schema"] == nlohmann::json::array({"l", "o"}));
}
