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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gus/plan.hpp"
#include "gus/relation.hpp"

namespace gus {

//! Where a base table comes from and how its rows are identified.
struct TableSpec {
  std::string name;
  std::filesystem::path path;
  //! A column name, "rowIndex" (0-based line order), or an integer expression
  //! over columns such as "l_orderkey*10+l_linenumber".
  std::string id = "rowIndex";
  std::map<std::string, ColumnType> columns;
};

struct PlanDocument {
  std::map<std::string, TableSpec> tables;
  PlanPtr plan;
  std::vector<double> quantiles;
  double level = 0.95;
};

//! Parses the JSON plan DSL. Relative table paths resolve against `base_dir`.
//! Errors carry the JSON pointer of the offending node (or the byte offset of a
//! syntax error). Scanning one table on both sides of a join is rejected here.
PlanDocument parse_plan(std::string_view text, const std::filesystem::path& base_dir = {});
PlanDocument load_plan(const std::filesystem::path& path);

//! Reads a headed CSV; only the declared columns are kept, in header order.
//! Throws IngestError for missing columns, unparsable values and duplicate ids.
BaseTable ingest_csv(const std::filesystem::path& path, const TableSpec& spec);

Catalog load_tables(const PlanDocument& doc);

struct TpchScale {
  std::int64_t lineitem = 1000;
  std::int64_t orders = 250;
  std::int64_t customer = 50;
  std::int64_t part = 100;
};

//! "l=1000,o=250,c=50,p=100"; omitted tables keep their defaults.
TpchScale parse_scale(std::string_view text);

//! Writes lineitem/orders/customer/part CSVs plus query1.json and large.json
//! (the four-relation plan) into `out_dir`. Output bytes depend only on
//! (scale, seed). Returns the written paths.
std::vector<std::filesystem::path> generate_tpch_tiny(const TpchScale& scale, std::uint64_t seed,
                                                      const std::filesystem::path& out_dir);

enum class ReportFormat { Json, Text };

struct RunOptions {
  std::uint64_t seed = 0;
  bool explain = false;
  bool oracle = false;
  std::optional<std::string> subsample;
  //! Monte Carlo trials when --oracle cannot enumerate.
  std::size_t oracle_trials = 2000;
};

//! Executes the sampled plan, normalizes it, runs the SBox and assembles the
//! report: estimate, normalized GUS, Y_S / ŷ_S / c_S tables, variance,
//! intervals, quantiles, plus "trace" and "oracle" sections on request.
nlohmann::json run(const PlanDocument& doc, const Catalog& catalog, const RunOptions& options);

//! Human-readable report; reals at 4 significant digits.
std::string render_text(const nlohmann::json& report);

//! 2 for plan errors, 3 for non-identifiable estimation, 1 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace gus
