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

#include "gus/sampling.hpp"

#include <algorithm>
#include <sstream>

#include "gus/error.hpp"
#include "gus/hash.hpp"

namespace gus {

double Rng::uniform() { return unit_interval(engine_()); }

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

namespace {

void check_p(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw SampleSizeError(std::string(what) + ": p = " + std::to_string(p) + " is outside [0, 1]");
  }
}

}  // namespace

SampleRelation bernoulli_sample(const SampleRelation& input, double p, std::uint64_t seed) {
  check_p(p, "bernoulli_sample");
  Rng rng(seed);
  SampleRelation out{input.schema, input.columns, {}};
  for (const auto& row : input.rows) {
    if (rng.uniform() < p) out.rows.push_back(row);
  }
  return out;
}

SampleRelation wor_sample(const SampleRelation& input, std::int64_t n, std::uint64_t seed) {
  const auto total = static_cast<std::int64_t>(input.size());
  if (n < 0 || n > total) {
    throw SampleSizeError("wor_sample: cannot draw n = " + std::to_string(n) + " rows from " +
                          std::to_string(total));
  }
  Rng rng(seed);
  std::vector<std::size_t> idx(input.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const auto take = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  SampleRelation out{input.schema, input.columns, {}};
  out.rows.reserve(take);
  for (auto i : idx) out.rows.push_back(input.rows[i]);
  return out;
}

bool lineage_keep(std::int64_t id, double p, std::uint64_t seed) {
  return unit_interval(mix64(seed ^ mix64(static_cast<std::uint64_t>(id)))) < p;
}

SampleRelation lineage_bernoulli(const SampleRelation& input, const LineageBernoulliSpec& spec) {
  std::vector<std::pair<std::size_t, LineageBernoulliDim>> dims;
  for (const auto& [rel, dim] : spec.dims) {
    check_p(dim.p, "lineage_bernoulli");
    if (!input.schema.contains(rel)) {
      throw SchemaError("lineage_bernoulli: relation '" + rel + "' is not in the input's lineage schema");
    }
    dims.emplace_back(input.schema.index_of(rel), dim);
  }
  SampleRelation out{input.schema, input.columns, {}};
  for (const auto& row : input.rows) {
    bool keep = true;
    for (const auto& [k, dim] : dims) {
      if (!lineage_keep(row.lineage.ids[k], dim.p, dim.seed)) {
        keep = false;
        break;
      }
    }
    if (keep) out.rows.push_back(row);
  }
  return out;
}

LineageBernoulliSpec parse_lineage_bernoulli(std::string_view text, std::uint64_t seed) {
  LineageBernoulliSpec spec;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw PlanError("sub-sample spec entry '" + item + "' is not of the form relation=p");
    }
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw PlanError("sub-sample spec entry '" + item + "' has a malformed probability");
    }
    check_p(p, "sub-sample spec");
    const auto name = item.substr(0, eq);
    // FNV-1a of the name, so the seed does not depend on entry order.
    std::uint64_t salt = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) salt = (salt ^ ch) * 0x100000001b3ULL;
    if (!spec.dims.emplace(name, LineageBernoulliDim{p, derive_seed(seed, salt)}).second) {
      throw PlanError("sub-sample spec names relation '" + name + "' twice");
    }
  }
  if (spec.dims.empty()) throw PlanError("sub-sample spec is empty");
  return spec;
}

void validate(const SamplerSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BernoulliSpec>) {
          check_p(s.p, "bernoulli");
        } else if constexpr (std::is_same_v<T, WorSpec>) {
          if (s.n < 0) throw SampleSizeError("wor: n must be non-negative");
        } else if constexpr (std::is_same_v<T, LineageBernoulliSpec>) {
          if (s.dims.empty()) throw SampleSizeError("lineage_bernoulli: no dimensions");
          for (const auto& [rel, dim] : s.dims) check_p(dim.p, "lineage_bernoulli");
        }
      },
      spec);
}

nlohmann::json to_json(const SamplerSpec& spec) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BernoulliSpec>) {
          return {{"method", "bernoulli"}, {"p", s.p}, {"seed", s.seed}};
        } else if constexpr (std::is_same_v<T, WorSpec>) {
          return {{"method", "wor"}, {"n", s.n}, {"seed", s.seed}};
        } else if constexpr (std::is_same_v<T, LineageBernoulliSpec>) {
          auto dims = nlohmann::json::object();
          for (const auto& [rel, dim] : s.dims) dims[rel] = {{"p", dim.p}, {"seed", dim.seed}};
          return {{"method", "lineage_bernoulli"}, {"dims", dims}};
        } else {
          return {{"method", "external"}, {"gus", gus::to_json(s.params)}};
        }
      },
      spec);
}

SamplerSpec sampler_spec_from_json(const nlohmann::json& j) {
  try {
    const auto method = j.at("method").get<std::string>();
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    SamplerSpec spec = [&]() -> SamplerSpec {
      if (method == "bernoulli") return BernoulliSpec{j.at("p").get<double>(), seed};
      if (method == "wor") return WorSpec{j.at("n").get<std::int64_t>(), seed};
      if (method == "lineage_bernoulli") {
        LineageBernoulliSpec lb;
        for (const auto& [rel, dim] : j.at("dims").items()) {
          lb.dims[rel] = LineageBernoulliDim{dim.at("p").get<double>(), dim.value("seed", std::uint64_t{0})};
        }
        return lb;
      }
      if (method == "external") return ExternalSpec{gus_params_from_json(j.at("gus"))};
      throw PlanError("unknown sampling method '" + method + "'");
    }();
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw PlanError(std::string("malformed sampler spec: ") + e.what());
  }
}

}  // namespace gus
