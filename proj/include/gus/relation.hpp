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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gus/lineage.hpp"
#include "gus/value.hpp"

namespace gus {

struct Row {
  std::vector<Value> values;
  Lineage lineage;
  double f = 0.0;
};

//! A (possibly sampled) intermediate result: rows carry their column values,
//! their lineage over `schema`, and the aggregate value f once it is bound.
//! Rows never repeat a full lineage vector.
struct SampleRelation {
  LineageSchema schema;
  std::vector<Column> columns;
  std::vector<Row> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  //! Throws TypeError if absent.
  std::size_t column_index(std::string_view name) const;

  //! Canonical row order: ascending lineage vector.
  void sort_by_lineage();
  //! Throws SchemaError on a repeated lineage or a lineage of the wrong width.
  void check_lineage() const;
};

//! Ingested base relation. Rows are validated against the declared column
//! types and every row carries a unique 64-bit id.
class BaseTable {
 public:
  BaseTable(std::string name, std::vector<Column> columns, std::vector<std::vector<Value>> rows,
            std::vector<std::int64_t> ids);

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Value>>& rows() const { return rows_; }
  const std::vector<std::int64_t>& ids() const { return ids_; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Value>> rows_;
  std::vector<std::int64_t> ids_;
};

//! Registry of base tables by name.
class Catalog {
 public:
  void add(BaseTable table);
  bool contains(std::string_view name) const;
  //! Throws PlanError for unknown tables.
  const BaseTable& get(std::string_view name) const;

 private:
  std::map<std::string, BaseTable, std::less<>> tables_;
};

}  // namespace gus
