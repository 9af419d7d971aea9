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
#include "gus/expr.hpp"
#include "gus/oracle.hpp"
#include "gus/predicate.hpp"
#include "gus/sbox.hpp"

using namespace gus;

TEST_CASE("common_lineage is positional equality") {
  CHECK(common_lineage({{1, 2}}, {{1, 3}}) == SubsetMask(0b01));
  CHECK(common_lineage({{1, 2}}, {{1, 2}}) == SubsetMask::full(2));
  CHECK(common_lineage({{1, 2}}, {{3, 4}}) == SubsetMask::empty());
  CHECK_THROWS_AS(common_lineage({{1}}, {{1, 2}}), SchemaError);
}

TEST_CASE("lineage schema is canonical and validated") {
  LineageSchema s({"o", "l"});
  CHECK(s.relations() == std::vector<std::string>{"l", "o"});
  CHECK(s == LineageSchema({"l", "o"}));
  CHECK(s.index_of("o") == 1);
  CHECK_THROWS_AS(s.index_of("c"), SchemaError);
  CHECK_THROWS_AS(LineageSchema({"l", "l"}), SchemaError);
  CHECK_THROWS_AS(LineageSchema({""}), SchemaError);

  CHECK_THROWS_AS(merge_disjoint(LineageSchema({"l"}), LineageSchema({"l", "o"})), SelfJoinError);
  CHECK(merge_disjoint(LineageSchema({"p"}), LineageSchema({"c", "l"})) == LineageSchema({"c", "l", "p"}));

  const LineageSchema wide({"c", "l", "o"});
  const auto m = s.embed(SubsetMask(0b10), wide);  // {o}
  CHECK(wide.subset_key(m) == "o");
  CHECK(s.restrict_from(wide.mask_of({"c", "o"}), wide) == SubsetMask(0b10));
}

TEST_CASE("subset keys round-trip and reject ambiguity") {
  LineageSchema s({"c", "l", "o", "p"});
  for (std::uint32_t m = 0; m < s.table_size(); ++m) {
    CHECK(s.parse_subset_key(s.subset_key(SubsetMask(m))) == SubsetMask(m));
  }
  CHECK(s.subset_key(SubsetMask::empty()).empty());
  CHECK_THROWS_AS(s.parse_subset_key("x"), SchemaError);

  LineageSchema tricky({"a", "ab", "b"});
  CHECK_THROWS_AS(tricky.parse_subset_key("ab"), SchemaError);
  CHECK(tricky.parse_subset_key("aab") == tricky.mask_of({"a", "ab"}));
}

TEST_CASE("concat_lineage re-sorts into the merged order") {
  const LineageSchema left({"o"});
  const LineageSchema right({"c", "l"});
  const auto merged = merge_disjoint(left, right);
  const auto t = concat_lineage({{7}}, left, {{3, 5}}, right, merged);
  CHECK(t.ids == std::vector<std::int64_t>{3, 5, 7});
  CHECK(project(t, merged.mask_of({"c", "o"})) == std::vector<std::int64_t>{3, 7});
}

TEST_CASE("GusParams validation") {
  const LineageSchema s({"l"});
  CHECK_NOTHROW(GusParams(s, 0.1, {0.01, 0.1}));
  CHECK_THROWS_AS(GusParams(s, 0.1, {0.01, 0.2}), SchemaError);
  CHECK_THROWS_AS(GusParams(s, 1.5, {0.01, 1.5}), SampleSizeError);
  CHECK_THROWS_AS(GusParams(s, 0.1, {-0.01, 0.1}), SampleSizeError);
  CHECK_THROWS_AS(GusParams(s, 0.1, {0.01}), SchemaError);
  CHECK(clamp_probability(1.0 + 1e-14, "x") == 1.0);
  CHECK(clamp_probability(-1e-14, "x") == 0.0);
  CHECK_THROWS_AS(clamp_probability(1.1, "x"), SampleSizeError);
}

TEST_CASE("GusParams JSON round-trip") {
  Rng rng(11);
  const LineageSchema s({"c", "l", "o"});
  for (int i = 0; i < 20; ++i) {
    const auto g = testing::random_dyadic_gus(s, rng);
    CHECK(gus_params_from_json(to_json(g)) == g);
  }
  auto j = to_json(gus_of_bernoulli(0.1, "l"));
  CHECK(j["b"][""] == doctest::Approx(0.01));
  j["b"].erase("");
  CHECK_THROWS_AS(gus_params_from_json(j), SchemaError);
}

TEST_CASE("extend_schema") {
  const auto g = gus_of_bernoulli(0.1, "l");
  const LineageSchema lo({"l", "o"});
  const auto w = extend_schema(g, lo);
  CHECK(w.a() == 0.1);
  CHECK(w.b(lo.mask_of({})) == doctest::Approx(0.01));
  CHECK(w.b(lo.mask_of({"o"})) == doctest::Approx(0.01));
  CHECK(w.b(lo.mask_of({"l"})) == doctest::Approx(0.1));
  CHECK(w.b(lo.mask_of({"l", "o"})) == doctest::Approx(0.1));

  const auto id = extend_schema(identity_gus(LineageSchema({"c"})), LineageSchema({"c", "p"}));
  for (double b : id.b_table()) CHECK(b == 1.0);
  CHECK(extend_schema(g, g.schema()) == g);
  CHECK_THROWS_AS(extend_schema(g, LineageSchema({"o"})), SchemaError);
}

TEST_CASE("extend_schema matches exact moments on a 3x3 cross product") {
  Catalog cat;
  cat.add(testing::keyed_table("l", "l", {{1, 1.0}, {2, 2.5}, {3, -1.0}}));
  cat.add(testing::keyed_table("o", "o", {{1, 3.0}, {2, 0.5}, {3, 2.0}}));
  const auto plan = plan::sum(Expr::parse("l_v*o_v"),
                              plan::cross(plan::sample(BernoulliSpec{0.1, 1}, plan::scan("l")), plan::scan("o")));
  const auto widened = extend_schema(gus_of_bernoulli(0.1, "l"), LineageSchema({"l", "o"}));
  CHECK(normalize_plan(plan, cat).top == widened);

  const auto full = execute(*strip_sampling(plan), cat, 0);
  const auto y = exact_y_terms(full.relation);
  const auto c = c_coefficients(widened);
  double var = -y[0];
  for (std::size_t s = 0; s < c.size(); ++s) var += c[s] / (widened.a() * widened.a()) * y[s];
  const auto exact = enumerate_exact_moments(plan, cat, widened.a());
  CHECK(testing::close_rel(var, exact.variance, 1e-9));
  CHECK(testing::close_rel(exact.mean, full.sum, 1e-12));
}

TEST_CASE("value types") {
  CHECK(parse_column_type("int64") == ColumnType::Int64);
  CHECK(parse_column_type("double") == ColumnType::Float64);
  CHECK(parse_column_type("string") == ColumnType::String);
  CHECK_THROWS_AS(parse_column_type("decimal"), TypeError);
  CHECK(as_double(Value{std::int64_t{3}}) == 3.0);
  CHECK_THROWS_AS(as_double(Value{std::string("x")}), TypeError);
}

TEST_CASE("expressions") {
  const std::vector<Column> cols{{"l_discount", ColumnType::Float64},
                                 {"l_tax", ColumnType::Float64},
                                 {"l_orderkey", ColumnType::Int64},
                                 {"l_linenumber", ColumnType::Int64},
                                 {"name", ColumnType::String}};
  const std::vector<Value> row{0.2, 0.5, std::int64_t{12}, std::int64_t{3}, std::string("x")};

  CHECK(Expr::parse("l_discount*(1-l_tax)").bind(cols).eval_double(row) == doctest::Approx(0.1));
  CHECK(Expr::parse("1 + 2 * 3").bind(cols).eval_double(row) == 7.0);
  CHECK(Expr::parse("-(1 + 2) * 3").bind(cols).eval_double(row) == -9.0);
  CHECK(Expr::parse("7 / 2").bind(cols).eval_double(row) == 3.5);

  const auto id = Expr::parse("l_orderkey*10+l_linenumber").bind(cols).eval(row);
  REQUIRE(std::holds_alternative<std::int64_t>(id));
  CHECK(std::get<std::int64_t>(id) == 123);

  CHECK(Expr::parse("l_tax + l_orderkey").referenced_columns() == std::vector<std::string>{"l_tax", "l_orderkey"});
  CHECK_THROWS_AS(Expr::parse("1 +"), TypeError);
  CHECK_THROWS_AS(Expr::parse("(1"), TypeError);
  CHECK_THROWS_AS(Expr::parse("1 $ 2"), TypeError);
  CHECK_THROWS_AS(Expr::parse("nope").bind(cols), TypeError);
  CHECK_THROWS_AS(Expr::parse("name * 2").bind(cols), TypeError);
  try {
    Expr::parse("1 + * 2");
    FAIL("expected a parse error");
  } catch (const TypeError& e) {
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
}

TEST_CASE("predicates") {
  const std::vector<Column> cols{{"x", ColumnType::Int64}, {"y", ColumnType::Float64}, {"s", ColumnType::String}};
  const std::vector<Value> row{std::int64_t{3}, 2.5, std::string("abc")};

  CHECK(Predicate::always_true().bind(cols).eval(row));
  CHECK_FALSE(Predicate::always_false().bind(cols).eval(row));

  Predicate p{{ColumnConstAtom{"x", CmpOp::Gt, std::int64_t{2}}, ColumnConstAtom{"y", CmpOp::Le, 2.5}}};
  CHECK(p.bind(cols).eval(row));
  Predicate mixed{{ColumnColumnAtom{"x", CmpOp::Gt, "y"}}};
  CHECK(mixed.bind(cols).eval(row));
  Predicate str{{ColumnConstAtom{"s", CmpOp::Eq, std::string("abc")}}};
  CHECK(str.bind(cols).eval(row));
  CHECK(p.conjoin(Predicate::always_false()).atoms.size() == 3);

  CHECK(parse_cmp_op("<=") == CmpOp::Le);
  CHECK(parse_cmp_op("!=") == CmpOp::Ne);
  CHECK_THROWS(parse_cmp_op("=>"));
  CHECK_THROWS_AS((Predicate{{ColumnConstAtom{"s", CmpOp::Lt, std::int64_t{1}}}}.bind(cols)), TypeError);
  CHECK_THROWS_AS((Predicate{{ColumnConstAtom{"zz", CmpOp::Lt, std::int64_t{1}}}}.bind(cols)), TypeError);
}

TEST_CASE("plan helpers") {
  const auto q = plan::sum(Expr::parse("l_v"),
                           plan::join(JoinCondition{{{"l_k", "o_k"}}, {}},
                                      plan::sample(BernoulliSpec{0.1, 1}, plan::scan("l")),
                                      plan::sample(WorSpec{2, 2}, plan::scan("o"))));
  CHECK(lineage_schema(*q) == LineageSchema({"l", "o"}));
  CHECK(contains_sampling(*q));
  CHECK_FALSE(contains_sampling(*strip_sampling(q)));
  CHECK(describe(*q).find("Bernoulli") != std::string::npos);

  const auto self = plan::cross(plan::scan("l"), plan::sample(BernoulliSpec{0.5, 0}, plan::scan("l")));
  CHECK_THROWS_AS(lineage_schema(*self), SelfJoinError);
  CHECK(same_relational_plan(*plan::scan("l"), *plan::scan("l")));
  CHECK_FALSE(same_relational_plan(*plan::scan("l"), *plan::scan("o")));
}
