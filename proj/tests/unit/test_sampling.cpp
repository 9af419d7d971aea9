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

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "gus/engine.hpp"
#include "gus/error.hpp"
#include "gus/hash.hpp"

using namespace gus;

namespace {

SampleRelation rows(std::size_t n) {
  std::vector<std::pair<std::int64_t, double>> v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(static_cast<std::int64_t>(i), 1.0);
  return scan(testing::keyed_table("r", "r", v));
}

bool within_5_sigma(double freq, double p, double trials) {
  return std::fabs(freq - p) <= 5.0 * std::sqrt(p * (1.0 - p) / trials);
}

}  // namespace

TEST_CASE("Rng is reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(7) < 7u);
  }
}

TEST_CASE("bernoulli_sample") {
  const auto r = rows(10);
  CHECK(bernoulli_sample(r, 1.0, 3).size() == 10);
  CHECK(bernoulli_sample(r, 0.0, 3).empty());
  CHECK(bernoulli_sample(r, 0.5, 3).rows.size() == bernoulli_sample(r, 0.5, 3).rows.size());

  const auto big = rows(10000);
  for (std::uint64_t seed : {1u, 2u, 3u, 99u, 12345u}) {
    const auto kept = bernoulli_sample(big, 0.5, seed).size();
    CHECK(kept >= 4750);
    CHECK(kept <= 5250);
  }

  const auto small = rows(3);
  constexpr int kTrials = 10000;
  int hits = 0;
  for (int t = 0; t < kTrials; ++t) {
    const auto s = bernoulli_sample(small, 0.5, derive_seed(77, t));
    for (const auto& row : s.rows) hits += row.lineage.ids[0] == small.rows[1].lineage.ids[0];
  }
  CHECK(within_5_sigma(hits / double(kTrials), 0.5, kTrials));
}

TEST_CASE("wor_sample") {
  const auto r = rows(4);
  CHECK(wor_sample(r, 4, 1).size() == 4);
  CHECK(wor_sample(r, 0, 1).empty());
  CHECK_THROWS_AS(wor_sample(r, 5, 1), SampleSizeError);
  CHECK_THROWS_AS(wor_sample(r, -1, 1), SampleSizeError);

  constexpr int kTrials = 60000;
  std::map<std::pair<std::int64_t, std::int64_t>, int> pairs;
  for (int t = 0; t < kTrials; ++t) {
    const auto s = wor_sample(r, 2, derive_seed(5, t));
    REQUIRE(s.size() == 2);
    // Kept rows stay in input order.
    CHECK(s.rows[0].lineage < s.rows[1].lineage);
    ++pairs[{s.rows[0].lineage.ids[0], s.rows[1].lineage.ids[0]}];
  }
  CHECK(pairs.size() == 6);
  for (const auto& [pair, count] : pairs) CHECK(within_5_sigma(count / double(kTrials), 1.0 / 6.0, kTrials));
}

TEST_CASE("lineage_bernoulli") {
  Catalog cat;
  cat.add(testing::keyed_table("l", "l", {{1, 1.0}, {2, 1.0}, {3, 1.0}}));
  cat.add(testing::keyed_table("o", "o", {{1, 1.0}, {2, 1.0}}));
  const auto lo = cross(scan(cat.get("l")), scan(cat.get("o")));

  LineageBernoulliSpec keep_all{{{"l", {1.0, 1}}, {"o", {1.0, 2}}}};
  CHECK(lineage_bernoulli(lo, keep_all).size() == lo.size());
  CHECK_THROWS_AS(lineage_bernoulli(lo, LineageBernoulliSpec{{{"c", {0.5, 1}}}}), SchemaError);

  // Rows sharing an o id are kept or dropped together.
  const LineageSchema s({"l", "o"});
  SampleRelation shared{s, {}, {{{}, {{1, 42}}, 0.0}, {{}, {{2, 42}}, 0.0}}};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto out = lineage_bernoulli(shared, LineageBernoulliSpec{{{"o", {0.3, seed}}}});
    CHECK((out.size() == 0 || out.size() == 2));
  }

  // Pairwise retention of the bi-dimensional Bernoulli(0.2, 0.3).
  constexpr int kTrials = 10000;
  const Lineage t{{1, 1}}, same_l{{1, 2}}, same_o{{2, 1}}, none{{2, 2}};
  std::map<std::string, int> hits;
  for (int k = 0; k < kTrials; ++k) {
    LineageBernoulliSpec spec{{{"l", {0.2, derive_seed(k, 1)}}, {"o", {0.3, derive_seed(k, 2)}}}};
    const auto out = lineage_bernoulli(lo, spec);
    auto in = [&](const Lineage& x) {
      return std::any_of(out.rows.begin(), out.rows.end(), [&](const Row& r) { return r.lineage == x; });
    };
    const bool has_t = in(t);
    hits["lo"] += has_t;
    hits["l"] += has_t && in(same_l);
    hits["o"] += has_t && in(same_o);
    hits[""] += has_t && in(none);
  }
  CHECK(within_5_sigma(hits["lo"] / double(kTrials), 0.06, kTrials));
  CHECK(within_5_sigma(hits["l"] / double(kTrials), 0.018, kTrials));
  CHECK(within_5_sigma(hits["o"] / double(kTrials), 0.012, kTrials));
  CHECK(within_5_sigma(hits[""] / double(kTrials), 0.0036, kTrials));
}

TEST_CASE("lineage_keep is a pure function of (id, p, seed)") {
  CHECK(lineage_keep(42, 0.3, 7) == lineage_keep(42, 0.3, 7));
  CHECK(lineage_keep(42, 1.0, 7));
  CHECK_FALSE(lineage_keep(42, 0.0, 7));
}

TEST_CASE("parse_lineage_bernoulli") {
  const auto spec = parse_lineage_bernoulli("l=0.2,o=0.3", 9);
  REQUIRE(spec.dims.size() == 2);
  CHECK(spec.dims.at("l").p == 0.2);
  CHECK(spec.dims.at("o").p == 0.3);
  CHECK(spec.dims.at("l").seed != spec.dims.at("o").seed);
  CHECK_THROWS_AS(parse_lineage_bernoulli("l=", 0), PlanError);
  CHECK_THROWS_AS(parse_lineage_bernoulli("l=0.2,l=0.3", 0), PlanError);
  CHECK_THROWS_AS(parse_lineage_bernoulli("l=1.5", 0), SampleSizeError);
  CHECK_THROWS_AS(parse_lineage_bernoulli("", 0), PlanError);
}

TEST_CASE("sampler specs round-trip through JSON") {
  const std::vector<SamplerSpec> specs{
      BernoulliSpec{0.1, 3},
      WorSpec{1000, 4},
      LineageBernoulliSpec{{{"l", {0.2, 5}}, {"o", {0.3, 6}}}},
      ExternalSpec{gus_of_bernoulli(0.25, "l")},
  };
  for (const auto& s : specs) CHECK(to_json(sampler_spec_from_json(to_json(s))) == to_json(s));
  CHECK_THROWS_AS(sampler_spec_from_json({{"method", "reservoir"}}), PlanError);
  CHECK_THROWS_AS(sampler_spec_from_json({{"method", "bernoulli"}}), PlanError);
  CHECK_THROWS_AS(sampler_spec_from_json({{"method", "bernoulli"}, {"p", -0.1}}), SampleSizeError);
}

TEST_CASE("external samples pass through the executor") {
  Catalog cat;
  cat.add(testing::keyed_table("l", "l", {{1, 1.0}, {2, 2.0}}));
  const auto q = plan::sum(Expr::parse("l_v"),
                           plan::sample(ExternalSpec{gus_of_bernoulli(0.5, "l")}, plan::scan("l")));
  CHECK(execute(*q, cat, 1).sum == 3.0);
  const auto bad = plan::sample(ExternalSpec{gus_of_bernoulli(0.5, "o")}, plan::scan("l"));
  CHECK_THROWS_AS(execute(*bad, cat, 1), SchemaError);
}

TEST_CASE("sub-sample seeds do not depend on entry order") {
  const auto a = parse_lineage_bernoulli("l=0.2,o=0.3", 9);
  const auto b = parse_lineage_bernoulli("o=0.3,l=0.2", 9);
  CHECK(a.dims.at("l").seed == b.dims.at("l").seed);
  CHECK(a.dims.at("o").seed == b.dims.at("o").seed);
}
