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

#include "gus/value.hpp"

#include "gus/error.hpp"

namespace gus {

ColumnType parse_column_type(std::string_view text) {
  if (text == "int64" || text == "int") return ColumnType::Int64;
  if (text == "float64" || text == "double" || text == "float") return ColumnType::Float64;
  if (text == "string") return ColumnType::String;
  throw TypeError("unknown column type '" + std::string(text) + "' (expected int64, float64 or string)");
}

std::string_view to_string(ColumnType type) {
  switch (type) {
    case ColumnType::Int64:
      return "int64";
    case ColumnType::Float64:
      return "float64";
    case ColumnType::String:
      return "string";
  }
  return "?";
}

ColumnType type_of(const Value& v) {
  switch (v.index()) {
    case 0:
      return ColumnType::Int64;
    case 1:
      return ColumnType::Float64;
    default:
      return ColumnType::String;
  }
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw TypeError("string value used where a number is required");
}

}  // namespace gus
