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

#include "gus/predicate.hpp"

#include <sstream>

#include "gus/error.hpp"

namespace gus {

namespace {

template <typename T>
bool compare(const T& x, CmpOp op, const T& y) {
  switch (op) {
    case CmpOp::Eq:
      return x == y;
    case CmpOp::Ne:
      return x != y;
    case CmpOp::Lt:
      return x < y;
    case CmpOp::Le:
      return x <= y;
    case CmpOp::Gt:
      return x > y;
    case CmpOp::Ge:
      return x >= y;
  }
  return false;
}

bool compare_values(const Value& x, CmpOp op, const Value& y) {
  if (x.index() == y.index()) {
    return std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          return compare<T>(a, op, std::get<T>(y));
        },
        x);
  }
  // Mixed int/float: compare as reals. Strings never reach here (checked at bind).
  return compare(as_double(x), op, as_double(y));
}

std::size_t find_column(std::span<const Column> columns, const std::string& name) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw TypeError("predicate references unknown column '" + name + "'");
}

void check_comparable(ColumnType a, ColumnType b, const std::string& what) {
  if (is_numeric(a) != is_numeric(b)) {
    throw TypeError("type mismatch in comparison " + what + ": " + std::string(to_string(a)) + " vs " +
                    std::string(to_string(b)));
  }
}

std::string value_text(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return "'" + x + "'";
        } else {
          std::ostringstream os;
          os << x;
          return os.str();
        }
      },
      v);
}

}  // namespace

CmpOp parse_cmp_op(std::string_view text) {
  if (text == "=" || text == "==") return CmpOp::Eq;
  if (text == "!=" || text == "<>") return CmpOp::Ne;
  if (text == "<") return CmpOp::Lt;
  if (text == "<=") return CmpOp::Le;
  if (text == ">") return CmpOp::Gt;
  if (text == ">=") return CmpOp::Ge;
  throw TypeError("unknown comparison operator '" + std::string(text) + "'");
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "=";
    case CmpOp::Ne:
      return "!=";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

Predicate Predicate::conjoin(const Predicate& other) const {
  Predicate out = *this;
  out.atoms.insert(out.atoms.end(), other.atoms.begin(), other.atoms.end());
  return out;
}

std::string Predicate::describe() const {
  if (atoms.empty()) return "true";
  std::string out;
  for (const auto& atom : atoms) {
    if (!out.empty()) out += " AND ";
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ColumnConstAtom>) {
            out += a.column + " " + std::string(to_string(a.op)) + " " + value_text(a.constant);
          } else if constexpr (std::is_same_v<T, ColumnColumnAtom>) {
            out += a.left + " " + std::string(to_string(a.op)) + " " + a.right;
          } else {
            out += a.value ? "true" : "false";
          }
        },
        atom);
  }
  return out;
}

BoundPredicate Predicate::bind(std::span<const Column> columns) const {
  BoundPredicate bound;
  for (const auto& atom : atoms) {
    BoundPredicate::Check check;
    if (const auto* cc = std::get_if<ColumnConstAtom>(&atom)) {
      check.kind = BoundPredicate::Check::ColConst;
      check.op = cc->op;
      check.lhs = find_column(columns, cc->column);
      check.constant = cc->constant;
      check_comparable(columns[check.lhs].type, type_of(cc->constant), cc->column);
    } else if (const auto* col = std::get_if<ColumnColumnAtom>(&atom)) {
      check.kind = BoundPredicate::Check::ColCol;
      check.op = col->op;
      check.lhs = find_column(columns, col->left);
      check.rhs = find_column(columns, col->right);
      check_comparable(columns[check.lhs].type, columns[check.rhs].type, col->left + " vs " + col->right);
    } else {
      check.kind = BoundPredicate::Check::Const;
      check.literal = std::get<ConstAtom>(atom).value;
    }
    bound.checks_.push_back(std::move(check));
  }
  return bound;
}

bool BoundPredicate::eval(std::span<const Value> row) const {
  for (const auto& c : checks_) {
    switch (c.kind) {
      case Check::Const:
        if (!c.literal) return false;
        break;
      case Check::ColConst:
        if (!compare_values(row[c.lhs], c.op, c.constant)) return false;
        break;
      case Check::ColCol:
        if (!compare_values(row[c.lhs], c.op, row[c.rhs])) return false;
        break;
    }
  }
  return true;
}

std::string JoinCondition::describe() const {
  std::string out;
  for (const auto& [l, r] : equalities) {
    if (!out.empty()) out += " AND ";
    out += l + " = " + r;
  }
  if (!residual.atoms.empty()) {
    if (!out.empty()) out += " AND ";
    out += residual.describe();
  }
  return out.empty() ? "true" : out;
}

}  // namespace gus
