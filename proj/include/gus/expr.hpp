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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gus/value.hpp"

namespace gus {

//! Result of evaluating an arithmetic expression. Integer arithmetic is kept
//! exact while every operand is an integer (ids built from key columns rely on it).
using Numeric = std::variant<std::int64_t, double>;

inline double to_double(Numeric n) {
  return std::visit([](auto v) { return static_cast<double>(v); }, n);
}

class BoundExpr;

//! Arithmetic expression over numeric columns: + - * /, unary minus,
//! parentheses, integer and real literals, column references.
class Expr {
 public:
  struct Node;

  //! Throws TypeError with the 1-based character position of the problem.
  static Expr parse(std::string_view text);
  static Expr constant(double value);

  const std::string& text() const { return text_; }
  std::vector<std::string> referenced_columns() const;

  //! Resolves column references; throws TypeError on unknown or non-numeric columns.
  BoundExpr bind(std::span<const Column> columns) const;

 private:
  Expr(std::string text, std::shared_ptr<const Node> root) : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

class BoundExpr {
 public:
  Numeric eval(std::span<const Value> row) const;
  double eval_double(std::span<const Value> row) const { return to_double(eval(row)); }

  struct Op;

 private:
  friend class Expr;
  std::vector<Op> program_;  // postfix
};

struct BoundExpr::Op {
  enum Kind { Const, Column, Neg, Add, Sub, Mul, Div } kind;
  Numeric constant{std::int64_t{0}};
  std::size_t column = 0;
};

}  // namespace gus
