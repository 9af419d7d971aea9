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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace gus {

//! Bitmask over the positions of a LineageSchema. Bit k stands for the k-th
//! relation in canonical (sorted) order.
struct SubsetMask {
  std::uint32_t bits = 0;

  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t b) : bits(b) {}

  static constexpr SubsetMask empty() { return SubsetMask{}; }
  static constexpr SubsetMask full(std::size_t n) { return SubsetMask{(std::uint32_t{1} << n) - 1u}; }

  constexpr bool contains(std::size_t k) const { return (bits >> k) & 1u; }
  constexpr int size() const { return __builtin_popcount(bits); }
  constexpr bool is_subset_of(SubsetMask other) const { return (bits & ~other.bits) == 0; }

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask{bits | o.bits}; }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask{bits & o.bits}; }
  constexpr SubsetMask without(SubsetMask o) const { return SubsetMask{bits & ~o.bits}; }

  constexpr auto operator<=>(const SubsetMask&) const = default;
};

//! Largest schema the dense 2^n tables are allowed to cover.
inline constexpr std::size_t kMaxSchemaSize = 20;

//! Ordered set of base-relation names. Construction sorts and validates, so two
//! schemas over the same relations always have the same bit layout.
class LineageSchema {
 public:
  LineageSchema() = default;
  explicit LineageSchema(std::vector<std::string> relations);
  LineageSchema(std::initializer_list<std::string> relations)
      : LineageSchema(std::vector<std::string>(relations)) {}

  std::size_t size() const { return relations_.size(); }
  bool empty() const { return relations_.empty(); }
  std::size_t table_size() const { return std::size_t{1} << relations_.size(); }
  const std::vector<std::string>& relations() const { return relations_; }
  const std::string& relation(std::size_t k) const { return relations_.at(k); }

  bool contains(std::string_view name) const;
  //! Throws SchemaError if absent.
  std::size_t index_of(std::string_view name) const;

  SubsetMask full_mask() const { return SubsetMask::full(size()); }
  SubsetMask mask_of(const std::vector<std::string>& names) const;

  bool is_subset_of(const LineageSchema& wider) const;
  bool disjoint_with(const LineageSchema& other) const;

  //! Re-expresses a mask over this schema as a mask over `wider`.
  SubsetMask embed(SubsetMask m, const LineageSchema& wider) const;
  //! Restricts a mask over `wider` to the relations of this schema.
  SubsetMask restrict_from(SubsetMask wide_mask, const LineageSchema& wider) const;

  //! Comma-free concatenation of the member names in canonical order ("" = empty set).
  std::string subset_key(SubsetMask m) const;
  //! Inverse of subset_key. Throws SchemaError on unknown or ambiguous keys.
  SubsetMask parse_subset_key(std::string_view key) const;

  bool operator==(const LineageSchema&) const = default;

 private:
  std::vector<std::string> relations_;
};

//! Canonical merge of two disjoint schemas. Throws SelfJoinError on overlap.
LineageSchema merge_disjoint(const LineageSchema& left, const LineageSchema& right);

//! Per-tuple vector of base-tuple ids, positionally aligned with a LineageSchema.
struct Lineage {
  std::vector<std::int64_t> ids;

  auto operator<=>(const Lineage&) const = default;
};

//! Positions on which two lineages agree.
SubsetMask common_lineage(const Lineage& t, const Lineage& u);

//! Lineage of a joined tuple, re-sorted into the canonical order of `merged`.
Lineage concat_lineage(const Lineage& left, const LineageSchema& left_schema,
                       const Lineage& right, const LineageSchema& right_schema,
                       const LineageSchema& merged);

//! The ids selected by `m`, in position order.
std::vector<std::int64_t> project(const Lineage& t, SubsetMask m);

struct LineageHash {
  std::size_t operator()(const Lineage& l) const noexcept;
};

}  // namespace gus
