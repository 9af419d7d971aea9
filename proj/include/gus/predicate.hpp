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

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gus/value.hpp"

namespace gus {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

CmpOp parse_cmp_op(std::string_view text);
std::string_view to_string(CmpOp op);

//! column <op> constant
struct ColumnConstAtom {
  std::string column;
  CmpOp op;
  Value constant;
};

//! column <op> column
struct ColumnColumnAtom {
  std::string left;
  CmpOp op;
  std::string right;
};

//! Literal true/false.
struct ConstAtom {
  bool value;
};

using Atom = std::variant<ColumnConstAtom, ColumnColumnAtom, ConstAtom>;

class BoundPredicate;

//! Conjunction of atoms. The empty conjunction is always true.
struct Predicate {
  std::vector<Atom> atoms;

  static Predicate always_true() { return {}; }
  static Predicate always_false() { return Predicate{{ConstAtom{false}}}; }

  Predicate conjoin(const Predicate& other) const;
  std::string describe() const;

  //! Throws TypeError on unknown columns or string/number comparisons.
  BoundPredicate bind(std::span<const Column> columns) const;
};

class BoundPredicate {
 public:
  bool eval(std::span<const Value> row) const;

 private:
  friend struct Predicate;
  struct Check {
    enum Kind { Const, ColConst, ColCol } kind;
    bool literal = true;
    CmpOp op = CmpOp::Eq;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    Value constant;
  };
  std::vector<Check> checks_;
};

//! Conjunctive join condition: equality pairs (left column, right column),
//! which drive the hash join, plus a residual theta predicate over the
//! concatenated row.
struct JoinCondition {
  std::vector<std::pair<std::string, std::string>> equalities;
  Predicate residual;

  std::string describe() const;
};

}  // namespace gus
