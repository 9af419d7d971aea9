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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "gus/algebra.hpp"
#include "gus/gus_params.hpp"
#include "gus/relation.hpp"
#include "gus/sampling.hpp"

namespace gus::testing {

//! Two-column table (<prefix>_k int64, <prefix>_v float64) with ids 1..n.
inline BaseTable keyed_table(const std::string& name, const std::string& prefix,
                             const std::vector<std::pair<std::int64_t, double>>& rows) {
  std::vector<std::vector<Value>> values;
  std::vector<std::int64_t> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values.push_back({rows[i].first, rows[i].second});
    ids.push_back(static_cast<std::int64_t>(i + 1));
  }
  return BaseTable(name, {{prefix + "_k", ColumnType::Int64}, {prefix + "_v", ColumnType::Float64}},
                   std::move(values), std::move(ids));
}

//! Random GUS table on the 1/64 grid: a uniform, b_T in [max(0, 2a - 1), a],
//! b_full = a. Sums and products of such values are exact in double.
inline GusParams random_dyadic_gus(const LineageSchema& schema, Rng& rng) {
  const auto a_units = static_cast<std::int64_t>(rng.below(65));
  const double a = static_cast<double>(a_units) / 64.0;
  const std::int64_t lo = std::max<std::int64_t>(0, 2 * a_units - 64);
  SubsetValues b(schema.table_size());
  for (auto& v : b) v = static_cast<double>(lo + static_cast<std::int64_t>(rng.below(a_units - lo + 1))) / 64.0;
  b[schema.full_mask().bits] = a;
  return GusParams(schema, a, std::move(b));
}

//! |x - printed| within two units of the 4th significant digit of `printed`.
inline bool matches_printed(double x, double printed) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::fabs(printed))) - 3.0);
  return std::fabs(x - printed) <= 2.0 * unit;
}

inline bool close_rel(double x, double y, double rel) {
  return std::fabs(x - y) <= rel * std::max({std::fabs(x), std::fabs(y), 1e-300});
}

//! Fresh scratch directory under the system temp path, private to this process.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gus_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gus::testing
