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

#include "gus/relation.hpp"

#include <algorithm>
#include <unordered_set>

#include "gus/error.hpp"

namespace gus {

std::size_t SampleRelation::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw TypeError("unknown column '" + std::string(name) + "'");
}

void SampleRelation::sort_by_lineage() {
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.lineage < y.lineage; });
}

void SampleRelation::check_lineage() const {
  std::unordered_set<Lineage, LineageHash> seen;
  for (const auto& row : rows) {
    if (row.lineage.ids.size() != schema.size()) {
      throw SchemaError("row lineage width does not match the relation's lineage schema");
    }
    if (!seen.insert(row.lineage).second) {
      throw SchemaError("relation repeats a lineage vector; samples must be duplicate-free");
    }
  }
}

BaseTable::BaseTable(std::string name, std::vector<Column> columns, std::vector<std::vector<Value>> rows,
                     std::vector<std::int64_t> ids)
    : name_(std::move(name)), columns_(std::move(columns)), rows_(std::move(rows)), ids_(std::move(ids)) {
  if (name_.empty()) throw IngestError("table name must be non-empty");
  if (ids_.size() != rows_.size()) throw IngestError("table '" + name_ + "': one id per row required");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != columns_.size()) {
      throw IngestError("table '" + name_ + "': row " + std::to_string(r) + " has " +
                        std::to_string(rows_[r].size()) + " values, expected " + std::to_string(columns_.size()));
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (type_of(rows_[r][c]) != columns_[c].type) {
        throw IngestError("table '" + name_ + "': row " + std::to_string(r) + " column '" + columns_[c].name +
                          "' is not " + std::string(to_string(columns_[c].type)));
      }
    }
  }
  std::unordered_set<std::int64_t> seen;
  for (auto id : ids_) {
    if (!seen.insert(id).second) {
      throw IngestError("table '" + name_ + "': duplicate row id " + std::to_string(id));
    }
  }
}

void Catalog::add(BaseTable table) {
  std::string key = table.name();
  tables_.insert_or_assign(std::move(key), std::move(table));
}

bool Catalog::contains(std::string_view name) const { return tables_.find(name) != tables_.end(); }

const BaseTable& Catalog::get(std::string_view name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw PlanError("unknown table '" + std::string(name) + "'");
  return it->second;
}

}  // namespace gus
