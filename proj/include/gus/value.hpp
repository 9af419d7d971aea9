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
#include <string_view>
#include <variant>

namespace gus {

enum class ColumnType { Int64, Float64, String };

using Value = std::variant<std::int64_t, double, std::string>;

struct Column {
  std::string name;
  ColumnType type;

  bool operator==(const Column&) const = default;
};

ColumnType parse_column_type(std::string_view text);
std::string_view to_string(ColumnType type);

inline bool is_numeric(ColumnType type) { return type != ColumnType::String; }

ColumnType type_of(const Value& v);

//! Numeric view of an int64/float64 value. Throws TypeError on strings.
double as_double(const Value& v);

}  // namespace gus
