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

#include "gus/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/tokenizer.hpp>
#include <fmt/format.h>

#include "gus/algebra.hpp"
#include "gus/engine.hpp"
#include "gus/error.hpp"
#include "gus/hash.hpp"
#include "gus/oracle.hpp"
#include "gus/sampling.hpp"
#include "gus/sbox.hpp"

namespace gus {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Plan DSL

std::string at(const std::string& ptr) { return (ptr.empty() ? "/" : ptr) + ": "; }

template <class E>
[[noreturn]] void rethrow_at(const std::string& ptr, const E& e) {
  throw E(at(ptr) + e.what());
}

class DocParser {
 public:
  explicit DocParser(const std::map<std::string, TableSpec>& tables) : tables_(tables) {}

  struct Parsed {
    PlanPtr node;
    std::vector<Column> columns;
  };

  Parsed node(const json& j, const std::string& ptr) {
    if (!j.is_object()) throw PlanError(at(ptr) + "plan node must be an object");
    const auto op = string_field(j, "op", ptr);
    if (op == "scan") {
      const auto table = string_field(j, "table", ptr);
      const auto it = tables_.find(table);
      if (it == tables_.end()) throw PlanError(at(ptr) + "table '" + table + "' is not declared under \"tables\"");
      std::vector<Column> cols;
      for (const auto& [name, type] : it->second.columns) cols.push_back({name, type});
      return {plan::scan(table), cols};
    }
    if (op == "select") {
      auto child = node(field(j, "input", ptr), ptr + "/input");
      auto pred = predicate(field(j, "where", ptr), ptr + "/where");
      check_predicate(pred, child.columns, ptr + "/where");
      return {plan::select(std::move(pred), child.node), child.columns};
    }
    if (op == "join" || op == "cross") {
      auto l = node(field(j, "left", ptr), ptr + "/left");
      auto r = node(field(j, "right", ptr), ptr + "/right");
      try {
        lineage_schema(*plan::cross(l.node, r.node));
      } catch (const SelfJoinError& e) {
        rethrow_at(ptr, e);
      }
      auto cols = l.columns;
      for (const auto& c : r.columns) {
        if (std::any_of(cols.begin(), cols.end(), [&](const Column& x) { return x.name == c.name; })) {
          throw TypeError(at(ptr) + "column '" + c.name + "' appears on both sides of the " + op);
        }
        cols.push_back(c);
      }
      PlanPtr out;
      if (op == "cross") {
        out = plan::cross(l.node, r.node);
      } else {
        JoinCondition cond;
        for (const auto& pair : field(j, "on", ptr)) {
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            throw PlanError(at(ptr + "/on") + "each equality is a [left column, right column] pair");
          }
          cond.equalities.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
          check_column(cond.equalities.back().first, l.columns, ptr + "/on");
          check_column(cond.equalities.back().second, r.columns, ptr + "/on");
        }
        if (j.contains("where")) {
          cond.residual = predicate(j.at("where"), ptr + "/where");
          check_predicate(cond.residual, cols, ptr + "/where");
        }
        out = plan::join(std::move(cond), l.node, r.node);
      }
      return {out, cols};
    }
    if (op == "union") {
      auto l = node(field(j, "left", ptr), ptr + "/left");
      auto r = node(field(j, "right", ptr), ptr + "/right");
      if (l.columns != r.columns) throw TypeError(at(ptr) + "union inputs have different columns");
      auto out = plan::union_dedup(l.node, r.node);
      try {
        lineage_schema(*out);
      } catch (const SchemaError& e) {
        rethrow_at(ptr, e);
      }
      return {out, l.columns};
    }
    if (op == "sample") {
      auto child = node(field(j, "input", ptr), ptr + "/input");
      SamplerSpec spec = [&] {
        try {
          return sampler_spec_from_json(j);
        } catch (const PlanError& e) {
          rethrow_at(ptr, e);
        } catch (const SampleSizeError& e) {
          rethrow_at(ptr, e);
        } catch (const SchemaError& e) {
          rethrow_at(ptr, e);
        }
      }();
      return {plan::sample(std::move(spec), child.node), child.columns};
    }
    if (op == "sum") {
      auto child = node(field(j, "input", ptr), ptr + "/input");
      const auto text = string_field(j, "expr", ptr);
      try {
        auto expr = Expr::parse(text);
        expr.bind(child.columns);
        return {plan::sum(std::move(expr), child.node), {}};
      } catch (const TypeError& e) {
        rethrow_at(ptr + "/expr", e);
      }
    }
    throw PlanError(at(ptr + "/op") + "unknown op '" + op + "' (expected scan, select, join, cross, union, sample or sum)");
  }

 private:
  static const json& field(const json& j, const char* key, const std::string& ptr) {
    if (!j.contains(key)) throw PlanError(at(ptr) + "missing \"" + key + "\"");
    return j.at(key);
  }

  static std::string string_field(const json& j, const char* key, const std::string& ptr) {
    const auto& v = field(j, key, ptr);
    if (!v.is_string()) throw PlanError(at(ptr + "/" + key) + "expected a string");
    return v.get<std::string>();
  }

  static void check_column(const std::string& name, const std::vector<Column>& cols, const std::string& ptr) {
    if (std::none_of(cols.begin(), cols.end(), [&](const Column& c) { return c.name == name; })) {
      throw TypeError(at(ptr) + "unknown column '" + name + "'");
    }
  }

  static void check_predicate(const Predicate& p, const std::vector<Column>& cols, const std::string& ptr) {
    try {
      p.bind(cols);
    } catch (const TypeError& e) {
      rethrow_at(ptr, e);
    }
  }

  static Value literal(const json& v, const std::string& ptr) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw PlanError(at(ptr) + "comparison operand must be a number, a string or {\"column\": name}");
  }

  static Atom atom(const json& a, const std::string& ptr) {
    if (a.is_boolean()) return ConstAtom{a.get<bool>()};
    if (!a.is_array() || a.size() != 3 || !a[0].is_string() || !a[1].is_string()) {
      throw PlanError(at(ptr) + "a comparison is [column, op, operand] or true/false");
    }
    CmpOp op;
    try {
      op = parse_cmp_op(a[1].get<std::string>());
    } catch (const Error& e) {
      throw PlanError(at(ptr + "/1") + e.what());
    }
    const auto lhs = a[0].get<std::string>();
    if (a[2].is_object()) {
      if (!a[2].contains("column") || !a[2]["column"].is_string()) {
        throw PlanError(at(ptr + "/2") + "column operand must be {\"column\": name}");
      }
      return ColumnColumnAtom{lhs, op, a[2]["column"].get<std::string>()};
    }
    return ColumnConstAtom{lhs, op, literal(a[2], ptr + "/2")};
  }

  static Predicate predicate(const json& j, const std::string& ptr) {
    Predicate p;
    if (j.is_boolean() || (j.is_array() && !j.empty() && j[0].is_string())) {
      p.atoms.push_back(atom(j, ptr));
      return p;
    }
    if (!j.is_array()) throw PlanError(at(ptr) + "predicate must be a comparison or a list of comparisons");
    for (std::size_t i = 0; i < j.size(); ++i) p.atoms.push_back(atom(j[i], ptr + "/" + std::to_string(i)));
    return p;
  }

  const std::map<std::string, TableSpec>& tables_;
};

TableSpec table_spec(const std::string& name, const json& j, const std::filesystem::path& base_dir) {
  const std::string ptr = "/tables/" + name;
  if (!j.is_object()) throw PlanError(at(ptr) + "table entry must be an object");
  TableSpec spec;
  spec.name = name;
  try {
    spec.path = j.at("path").get<std::string>();
    if (spec.path.is_relative() && !base_dir.empty()) spec.path = base_dir / spec.path;
    spec.id = j.value("id", std::string("rowIndex"));
    for (const auto& [col, type] : j.at("columns").items()) {
      try {
        spec.columns[col] = parse_column_type(type.get<std::string>());
      } catch (const Error& e) {
        throw TypeError(at(ptr + "/columns/" + col) + e.what());
      }
    }
  } catch (const json::exception& e) {
    throw PlanError(at(ptr) + e.what());
  }
  if (spec.columns.empty()) throw PlanError(at(ptr + "/columns") + "at least one column must be declared");
  return spec;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_csv_line(const std::string& line, const std::filesystem::path& path,
                                        std::size_t line_no) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  try {
    Tokenizer tok(line, boost::escaped_list_separator<char>('\\', ',', '"'));
    return {tok.begin(), tok.end()};
  } catch (const boost::escaped_list_error& e) {
    throw IngestError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
  }
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && p == end;
}

Value parse_cell(std::string_view text, ColumnType type) {
  switch (type) {
    case ColumnType::Int64: {
      std::int64_t v;
      if (!parse_number(text, v)) throw IngestError("cannot parse '" + std::string(text) + "' as int64");
      return v;
    }
    case ColumnType::Float64: {
      double v;
      if (!parse_number(text, v)) throw IngestError("cannot parse '" + std::string(text) + "' as float64");
      return v;
    }
    default:
      return std::string(text);
  }
}

// ---------------------------------------------------------------------------
// Reporting

std::string num(double x) {
  if (x == 0.0 || !std::isfinite(x)) return fmt::format("{}", x);
  const double mag = std::fabs(x);
  if (mag < 1e-3 || mag >= 1e6) return fmt::format("{:.3e}", x);
  return fmt::format("{:.4g}", x);
}

std::string subset_label(const std::string& key) { return key.empty() ? "{}" : key; }

std::string table_line(const json& table) {
  std::string out;
  for (const auto& [key, v] : table.items()) {
    if (!out.empty()) out += "  ";
    out += subset_label(key) + "=" + num(v.get<double>());
  }
  return out;
}

std::string gus_line(const json& g) { return "a=" + num(g.at("a").get<double>()) + "  " + table_line(g.at("b")); }

json oracle_section(const PlanPtr& plan, const Catalog& catalog, const GusParams& g, const RunOptions& options) {
  const auto stripped = strip_sampling(plan);
  auto full = execute(*stripped, catalog, 0);
  const auto y = exact_y_terms(full.relation);
  const auto c = c_coefficients(g);
  double var = 0.0;
  for (std::size_t s = 0; s < c.size(); ++s) var += c[s] / (g.a() * g.a()) * y[s];
  var -= y[0];

  json out{
      {"true_sum", full.sum},
      {"y_exact", subset_table_to_json(g.schema(), y)},
      {"variance_exact_y", var},
  };
  try {
    const auto m = enumerate_exact_moments(plan, catalog, g.a());
    out["method"] = "enumeration";
    out["moments"] = to_json(m);
  } catch (const EnumerationInfeasibleError& e) {
    const auto m = monte_carlo_moments(plan, catalog, g.a(), options.oracle_trials, derive_seed(options.seed, 0x0AC1E));
    out["method"] = "monte_carlo";
    out["moments"] = to_json(m);
    out["note"] = e.what();
  }
  return out;
}

}  // namespace

PlanDocument parse_plan(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw PlanError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw PlanError(at("") + "a plan document is a JSON object");
  if (!j.contains("plan")) throw PlanError(at("") + "missing \"plan\"");

  PlanDocument doc;
  if (j.contains("tables")) {
    if (!j["tables"].is_object()) throw PlanError(at("/tables") + "expected an object");
    for (const auto& [name, t] : j["tables"].items()) doc.tables[name] = table_spec(name, t, base_dir);
  }
  try {
    doc.quantiles = j.value("quantiles", std::vector<double>{});
    doc.level = j.value("level", 0.95);
  } catch (const json::exception& e) {
    throw PlanError(at("") + e.what());
  }
  for (std::size_t i = 0; i < doc.quantiles.size(); ++i) {
    const double q = doc.quantiles[i];
    if (!(q > 0.0 && q < 1.0)) throw PlanError(at("/quantiles/" + std::to_string(i)) + "quantile must lie in (0, 1)");
  }
  if (!(doc.level > 0.0 && doc.level < 1.0)) throw PlanError(at("/level") + "level must lie in (0, 1)");

  DocParser parser(doc.tables);
  doc.plan = parser.node(j["plan"], "/plan").node;
  return doc;
}

PlanDocument load_plan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open plan file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), path.parent_path());
}

BaseTable ingest_csv(const std::filesystem::path& path, const TableSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IngestError(path.string() + ": missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line, path, 1);

  // Declared columns in header order.
  std::vector<Column> columns;
  std::vector<std::size_t> source;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto it = spec.columns.find(header[i]);
    if (it == spec.columns.end()) continue;
    columns.push_back({header[i], it->second});
    source.push_back(i);
  }
  for (const auto& [name, type] : spec.columns) {
    if (std::none_of(columns.begin(), columns.end(), [&](const Column& c) { return c.name == name; })) {
      throw IngestError(path.string() + ": missing column '" + name + "'");
    }
  }

  enum class IdKind { RowIndex, Column, Expression } kind = IdKind::RowIndex;
  std::size_t id_column = 0;
  std::optional<BoundExpr> id_expr;
  if (spec.id != "rowIndex") {
    const auto it = std::find_if(columns.begin(), columns.end(), [&](const Column& c) { return c.name == spec.id; });
    if (it != columns.end()) {
      if (it->type != ColumnType::Int64) throw IngestError(path.string() + ": id column '" + spec.id + "' is not int64");
      kind = IdKind::Column;
      id_column = static_cast<std::size_t>(it - columns.begin());
    } else {
      try {
        id_expr = Expr::parse(spec.id).bind(columns);
      } catch (const TypeError& e) {
        throw IngestError(path.string() + ": id expression '" + spec.id + "': " + e.what());
      }
      kind = IdKind::Expression;
    }
  }

  std::vector<std::vector<Value>> rows;
  std::vector<std::int64_t> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line, path, line_no);
    if (cells.size() != header.size()) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(cells.size()));
    }
    std::vector<Value> row;
    row.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
      try {
        row.push_back(parse_cell(cells[source[k]], columns[k].type));
      } catch (const IngestError& e) {
        throw IngestError(path.string() + ":" + std::to_string(line_no) + ": column '" + columns[k].name +
                          "': " + e.what());
      }
    }
    switch (kind) {
      case IdKind::RowIndex:
        ids.push_back(static_cast<std::int64_t>(rows.size()));
        break;
      case IdKind::Column:
        ids.push_back(std::get<std::int64_t>(row[id_column]));
        break;
      case IdKind::Expression: {
        const auto v = id_expr->eval(row);
        if (!std::holds_alternative<std::int64_t>(v)) {
          throw IngestError(path.string() + ":" + std::to_string(line_no) + ": id expression is not integer-valued");
        }
        ids.push_back(std::get<std::int64_t>(v));
        break;
      }
    }
    rows.push_back(std::move(row));
  }
  try {
    return BaseTable(spec.name, std::move(columns), std::move(rows), std::move(ids));
  } catch (const IngestError& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
}

Catalog load_tables(const PlanDocument& doc) {
  Catalog catalog;
  for (const auto& [name, spec] : doc.tables) catalog.add(ingest_csv(spec.path, spec));
  return catalog;
}

TpchScale parse_scale(std::string_view text) {
  TpchScale scale;
  std::set<char> seen;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto item = text.substr(pos, end - pos);
    const auto eq = item.find('=');
    std::int64_t count = 0;
    if (eq != 1 || !parse_number(item.substr(2), count) || count < 1) {
      throw std::invalid_argument("bad scale entry '" + std::string(item) + "' (expected e.g. l=1000,o=250,c=50,p=100)");
    }
    const char table = item[0];
    if (!seen.insert(table).second) throw std::invalid_argument(std::string("scale repeats '") + table + "'");
    switch (table) {
      case 'l':
        scale.lineitem = count;
        break;
      case 'o':
        scale.orders = count;
        break;
      case 'c':
        scale.customer = count;
        break;
      case 'p':
        scale.part = count;
        break;
      default:
        throw std::invalid_argument(std::string("unknown table '") + table + "' in scale (use l, o, c, p)");
    }
    pos = end + 1;
  }
  return scale;
}

namespace {

constexpr std::int64_t kMaxLinesPerOrder = 7;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot write " + path.string());
  out << content;
  if (!out) throw IngestError("write failed for " + path.string());
}

json table_entry(const char* file, const char* id, const json& columns) {
  return {{"path", file}, {"id", id}, {"columns", columns}};
}

json scan(const char* table) { return {{"op", "scan"}, {"table", table}}; }

}  // namespace

std::vector<std::filesystem::path> generate_tpch_tiny(const TpchScale& scale, std::uint64_t seed,
                                                      const std::filesystem::path& out_dir) {
  if (scale.lineitem < 1 || scale.orders < 1 || scale.customer < 1 || scale.part < 1) {
    throw std::invalid_argument("every table needs at least one row");
  }
  if (scale.lineitem > kMaxLinesPerOrder * scale.orders) {
    throw std::invalid_argument("at most " + std::to_string(kMaxLinesPerOrder) + " lineitems per order");
  }
  std::filesystem::create_directories(out_dir);
  Rng rng(derive_seed(seed, 0x7C9));
  auto below = [&](std::int64_t n) { return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n))); };
  auto cents = [&](std::int64_t lo_cents, std::int64_t hi_cents) {
    return static_cast<double>(lo_cents + below(hi_cents - lo_cents + 1)) / 100.0;
  };

  std::string customer = "c_custkey,c_nationkey,c_acctbal\n";
  for (std::int64_t k = 1; k <= scale.customer; ++k) {
    customer += fmt::format("{},{},{:.2f}\n", k, below(25), cents(-99999, 999999));
  }

  std::vector<double> retail(static_cast<std::size_t>(scale.part) + 1);
  std::string part = "p_partkey,p_size,p_retailprice\n";
  for (std::int64_t k = 1; k <= scale.part; ++k) {
    retail[static_cast<std::size_t>(k)] = cents(100, 199999);
    part += fmt::format("{},{},{:.2f}\n", k, 1 + below(50), retail[static_cast<std::size_t>(k)]);
  }

  struct Line {
    std::int64_t order, number, partkey, quantity;
    double price, discount, tax;
  };
  std::vector<std::int64_t> lines_of(static_cast<std::size_t>(scale.orders) + 1, 0);
  std::vector<double> total(static_cast<std::size_t>(scale.orders) + 1, 0.0);
  std::vector<Line> lines;
  lines.reserve(static_cast<std::size_t>(scale.lineitem));
  for (std::int64_t i = 0; i < scale.lineitem; ++i) {
    std::int64_t order;
    do {
      order = 1 + below(scale.orders);
    } while (lines_of[static_cast<std::size_t>(order)] == kMaxLinesPerOrder);
    Line line{order, ++lines_of[static_cast<std::size_t>(order)], 1 + below(scale.part), 1 + below(50), 0.0, 0.0, 0.0};
    line.price = std::round(static_cast<double>(line.quantity) * retail[static_cast<std::size_t>(line.partkey)] * 100.0) / 100.0;
    line.discount = static_cast<double>(below(11)) / 100.0;
    line.tax = static_cast<double>(below(9)) / 100.0;
    total[static_cast<std::size_t>(order)] += line.price;
    lines.push_back(line);
  }
  std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
    return std::tie(x.order, x.number) < std::tie(y.order, y.number);
  });
  std::string lineitem = "l_orderkey,l_linenumber,l_partkey,l_quantity,l_extendedprice,l_discount,l_tax\n";
  for (const auto& l : lines) {
    lineitem += fmt::format("{},{},{},{},{:.2f},{:.2f},{:.2f}\n", l.order, l.number, l.partkey, l.quantity, l.price,
                            l.discount, l.tax);
  }

  std::string orders = "o_orderkey,o_custkey,o_totalprice,o_shippriority\n";
  for (std::int64_t k = 1; k <= scale.orders; ++k) {
    orders += fmt::format("{},{},{:.2f},{}\n", k, 1 + below(scale.customer), total[static_cast<std::size_t>(k)],
                          below(2));
  }

  const json l_cols{{"l_orderkey", "int64"},     {"l_linenumber", "int64"}, {"l_partkey", "int64"},
                    {"l_quantity", "int64"},     {"l_extendedprice", "float64"},
                    {"l_discount", "float64"},   {"l_tax", "float64"}};
  const json o_cols{{"o_orderkey", "int64"}, {"o_custkey", "int64"}, {"o_totalprice", "float64"},
                    {"o_shippriority", "int64"}};
  const json c_cols{{"c_custkey", "int64"}, {"c_nationkey", "int64"}, {"c_acctbal", "float64"}};
  const json p_cols{{"p_partkey", "int64"}, {"p_size", "int64"}, {"p_retailprice", "float64"}};

  // WOR size for the generated plans: a quarter of orders, capped at 1000, and at
  // least 2 so pair probabilities stay positive.
  const std::int64_t wor_n =
      std::clamp<std::int64_t>(scale.orders / 4, std::min<std::int64_t>(2, scale.orders), 1000);
  const json sampled_lo{{"op", "join"},
                        {"on", json::array({json::array({"l_orderkey", "o_orderkey"})})},
                        {"left", {{"op", "sample"}, {"method", "bernoulli"}, {"p", 0.1}, {"seed", 1}, {"input", scan("l")}}},
                        {"right", {{"op", "sample"}, {"method", "wor"}, {"n", wor_n}, {"seed", 2}, {"input", scan("o")}}}};

  const json query1{
      {"tables", {{"l", table_entry("lineitem.csv", "l_orderkey*10+l_linenumber", l_cols)},
                  {"o", table_entry("orders.csv", "o_orderkey", o_cols)}}},
      {"quantiles", {0.05, 0.95}},
      {"plan",
       {{"op", "sum"},
        {"expr", "l_discount*(1-l_tax)"},
        {"input", {{"op", "select"}, {"where", json::array({"l_extendedprice", ">", 100.0})}, {"input", sampled_lo}}}}}};

  const json large{
      {"tables", {{"l", table_entry("lineitem.csv", "l_orderkey*10+l_linenumber", l_cols)},
                  {"o", table_entry("orders.csv", "o_orderkey", o_cols)},
                  {"c", table_entry("customer.csv", "c_custkey", c_cols)},
                  {"p", table_entry("part.csv", "p_partkey", p_cols)}}},
      {"quantiles", {0.05, 0.95}},
      {"plan",
       {{"op", "sum"},
        {"expr", "l_extendedprice*(1-l_discount)"},
        {"input",
         {{"op", "join"},
          {"on", json::array({json::array({"l_partkey", "p_partkey"})})},
          {"left",
           {{"op", "join"},
            {"on", json::array({json::array({"o_custkey", "c_custkey"})})},
            {"left", sampled_lo},
            {"right", scan("c")}}},
          {"right",
           {{"op", "sample"}, {"method", "bernoulli"}, {"p", 0.5}, {"seed", 3}, {"input", scan("p")}}}}}}}};

  const std::vector<std::pair<std::string, std::string>> files{
      {"lineitem.csv", lineitem},
      {"orders.csv", orders},
      {"customer.csv", customer},
      {"part.csv", part},
      {"query1.json", query1.dump(2) + "\n"},
      {"large.json", large.dump(2) + "\n"},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    write_file(out_dir / name, content);
    written.push_back(out_dir / name);
  }
  return written;
}

json run(const PlanDocument& doc, const Catalog& catalog, const RunOptions& options) {
  if (!std::holds_alternative<SumOp>(doc.plan->op)) {
    throw PlanError("estimation needs a plan whose root is a sum aggregate");
  }
  const auto normalized = normalize_plan(doc.plan, catalog);
  const auto& g = normalized.top;
  auto output = execute(*doc.plan, catalog, options.seed);

  SboxOptions sbox{doc.level, doc.quantiles};
  const auto report = [&] {
    if (!options.subsample) return run_sbox(output.relation, g, sbox);
    const auto spec = parse_lineage_bernoulli(*options.subsample, derive_seed(options.seed, 0x5B5A));
    return subsample_variance(output.relation, g, spec, sbox);
  }();

  json out = to_json(report);
  out["seed"] = options.seed;
  if (options.explain) {
    auto trace = json::array();
    for (const auto& step : normalized.trace) trace.push_back(to_json(step));
    out["trace"] = trace;
  }
  if (options.oracle) out["oracle"] = oracle_section(doc.plan, catalog, g, options);
  return out;
}

std::string render_text(const json& report) {
  std::string out;
  auto line = [&](std::string_view label, const std::string& value) {
    out += fmt::format("{:<16}{}\n", label, value);
  };
  const double var = report.at("variance_hat").get<double>();
  line("estimate", num(report.at("estimate").get<double>()));
  line("variance", num(var) + (report.at("variance_raw").get<double>() < 0.0 ? " (clamped)" : ""));
  line("std. error", num(std::sqrt(var)));
  const auto level = fmt::format("{}%", report.at("level").get<double>() * 100.0);
  for (const char* key : {"ci_normal", "ci_chebyshev"}) {
    const auto& ci = report.at(key);
    line(std::string(key) == "ci_normal" ? "normal CI" : "chebyshev CI",
         "[" + num(ci[0].get<double>()) + ", " + num(ci[1].get<double>()) + "] at " + level);
  }
  for (const auto& q : report.at("quantiles")) {
    line(fmt::format("quantile {}", q.at("q").get<double>()), num(q.at("value").get<double>()));
  }
  line("sample rows", std::to_string(report.at("sample_rows").get<std::size_t>()));
  line("gus", gus_line(report.at("gus")));
  line("c", table_line(report.at("c")));
  line("y (sample)", table_line(report.at("y_sample")));
  line("y (unbiased)", table_line(report.at("y_hat")));
  if (report.contains("subsample")) {
    const auto& sub = report["subsample"];
    line("sub-sample rows", std::to_string(sub.at("rows").get<std::size_t>()));
    line("sub-sample gus", gus_line(sub.at("gus")));
  }
  for (const auto& d : report.at("diagnostics")) line("note", d.get<std::string>());
  if (report.contains("trace")) {
    std::size_t i = 0;
    for (const auto& step : report["trace"]) {
      auto label = step.at("rule").get<std::string>();
      if (!step.at("detail").get<std::string>().empty()) label += " " + step["detail"].get<std::string>();
      out += fmt::format("step {}: {}\n", ++i, label);
      out += fmt::format("  {}\n", gus_line(step.at("after")));
    }
  }
  if (report.contains("oracle")) {
    const auto& o = report["oracle"];
    line("true sum", num(o.at("true_sum").get<double>()));
    line("var (exact y)", num(o.at("variance_exact_y").get<double>()));
    line("oracle", o.at("method").get<std::string>() + ": mean " + num(o["moments"].at("mean").get<double>()) +
                       ", variance " + num(o["moments"].at("variance").get<double>()));
  }
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NotIdentifiableError*>(&e)) return 3;
  if (dynamic_cast<const PlanError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const TypeError*>(&e) || dynamic_cast<const SampleSizeError*>(&e)) {
    return 2;
  }
  return 1;
}

}  // namespace gus
