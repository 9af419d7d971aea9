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

#include "gus/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "gus/error.hpp"

namespace gus {

struct Expr::Node {
  enum Kind { Literal, ColumnRef, Neg, Add, Sub, Mul, Div } kind;
  Numeric literal{std::int64_t{0}};
  std::string column;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto root = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw TypeError("expression '" + std::string(text_) + "' at position " + std::to_string(pos_ + 1) + ": " +
                    msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Expr::Node::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Expr::Node::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = binary(Expr::Node::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Expr::Node::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Expr::Node::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Neg;
      n->lhs = parse_unary();
      return n;
    }
    if (accept('+')) return parse_unary();
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      auto inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.')) {
        ++pos_;
      }
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::ColumnRef;
      n->column = std::string(text_.substr(start, pos_ - start));
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    bool is_real = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.') {
        is_real = true;
        ++pos_;
      } else if ((c == 'e' || c == 'E') && pos_ > start) {
        is_real = true;
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      } else {
        break;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Literal;
    if (is_real) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) fail("malformed number '" + token + "'");
      n->literal = v;
    } else {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) fail("malformed integer '" + token + "'");
      n->literal = v;
    }
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_columns(const Expr::Node& n, std::vector<std::string>& out) {
  if (n.kind == Expr::Node::ColumnRef) out.push_back(n.column);
  if (n.lhs) collect_columns(*n.lhs, out);
  if (n.rhs) collect_columns(*n.rhs, out);
}

Numeric apply(BoundExpr::Op::Kind kind, Numeric lhs, Numeric rhs) {
  if (kind != BoundExpr::Op::Div && std::holds_alternative<std::int64_t>(lhs) &&
      std::holds_alternative<std::int64_t>(rhs)) {
    const auto x = std::get<std::int64_t>(lhs);
    const auto y = std::get<std::int64_t>(rhs);
    switch (kind) {
      case BoundExpr::Op::Add:
        return x + y;
      case BoundExpr::Op::Sub:
        return x - y;
      default:
        return x * y;
    }
  }
  const double x = to_double(lhs);
  const double y = to_double(rhs);
  switch (kind) {
    case BoundExpr::Op::Add:
      return x + y;
    case BoundExpr::Op::Sub:
      return x - y;
    case BoundExpr::Op::Mul:
      return x * y;
    default:
      return x / y;
  }
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Parser parser(text);
  return Expr(std::string(text), parser.parse());
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Literal;
  n->literal = value;
  return Expr(std::to_string(value), n);
}

std::vector<std::string> Expr::referenced_columns() const {
  std::vector<std::string> out;
  collect_columns(*root_, out);
  return out;
}

BoundExpr Expr::bind(std::span<const Column> columns) const {
  BoundExpr bound;
  auto emit = [&](auto&& self, const Node& n) -> void {
    switch (n.kind) {
      case Node::Literal:
        bound.program_.push_back({BoundExpr::Op::Const, n.literal, 0});
        return;
      case Node::ColumnRef: {
        std::size_t idx = columns.size();
        for (std::size_t i = 0; i < columns.size(); ++i) {
          if (columns[i].name == n.column) idx = i;
        }
        if (idx == columns.size()) {
          throw TypeError("expression '" + text_ + "': unknown column '" + n.column + "'");
        }
        if (!is_numeric(columns[idx].type)) {
          throw TypeError("expression '" + text_ + "': column '" + n.column + "' is not numeric");
        }
        bound.program_.push_back({BoundExpr::Op::Column, std::int64_t{0}, idx});
        return;
      }
      case Node::Neg:
        self(self, *n.lhs);
        bound.program_.push_back({BoundExpr::Op::Neg, std::int64_t{0}, 0});
        return;
      default:
        self(self, *n.lhs);
        self(self, *n.rhs);
        const auto kind = n.kind == Node::Add   ? BoundExpr::Op::Add
                          : n.kind == Node::Sub ? BoundExpr::Op::Sub
                          : n.kind == Node::Mul ? BoundExpr::Op::Mul
                                                : BoundExpr::Op::Div;
        bound.program_.push_back({kind, std::int64_t{0}, 0});
        return;
    }
  };
  emit(emit, *root_);
  return bound;
}

Numeric BoundExpr::eval(std::span<const Value> row) const {
  std::vector<Numeric> stack;
  stack.reserve(program_.size());
  for (const auto& op : program_) {
    switch (op.kind) {
      case Op::Const:
        stack.push_back(op.constant);
        break;
      case Op::Column: {
        const auto& v = row[op.column];
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
          stack.push_back(*i);
        } else {
          stack.push_back(std::get<double>(v));
        }
        break;
      }
      case Op::Neg: {
        auto& top = stack.back();
        top = std::visit([](auto x) -> Numeric { return -x; }, top);
        break;
      }
      default: {
        const Numeric rhs = stack.back();
        stack.pop_back();
        stack.back() = apply(op.kind, stack.back(), rhs);
        break;
      }
    }
  }
  return stack.back();
}

}  // namespace gus
