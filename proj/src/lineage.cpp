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

#include "gus/lineage.hpp"

#include <algorithm>
#include <functional>

#include "gus/error.hpp"
#include "gus/hash.hpp"

namespace gus {

LineageSchema::LineageSchema(std::vector<std::string> relations) : relations_(std::move(relations)) {
  std::sort(relations_.begin(), relations_.end());
  for (std::size_t k = 0; k < relations_.size(); ++k) {
    if (relations_[k].empty()) {
      throw SchemaError("lineage schema: relation names must be non-empty");
    }
    if (k > 0 && relations_[k] == relations_[k - 1]) {
      throw SchemaError("lineage schema: duplicate relation '" + relations_[k] + "'");
    }
  }
  if (relations_.size() > kMaxSchemaSize) {
    throw SchemaError("lineage schema: more than " + std::to_string(kMaxSchemaSize) + " relations");
  }
}

bool LineageSchema::contains(std::string_view name) const {
  return std::binary_search(relations_.begin(), relations_.end(), name);
}

std::size_t LineageSchema::index_of(std::string_view name) const {
  auto it = std::lower_bound(relations_.begin(), relations_.end(), name);
  if (it == relations_.end() || *it != name) {
    throw SchemaError("relation '" + std::string(name) + "' is not in the lineage schema");
  }
  return static_cast<std::size_t>(it - relations_.begin());
}

SubsetMask LineageSchema::mask_of(const std::vector<std::string>& names) const {
  SubsetMask m;
  for (const auto& name : names) {
    m.bits |= std::uint32_t{1} << index_of(name);
  }
  return m;
}

bool LineageSchema::is_subset_of(const LineageSchema& wider) const {
  return std::includes(wider.relations_.begin(), wider.relations_.end(), relations_.begin(),
                       relations_.end());
}

bool LineageSchema::disjoint_with(const LineageSchema& other) const {
  auto a = relations_.begin();
  auto b = other.relations_.begin();
  while (a != relations_.end() && b != other.relations_.end()) {
    if (*a == *b) return false;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return true;
}

SubsetMask LineageSchema::embed(SubsetMask m, const LineageSchema& wider) const {
  SubsetMask out;
  for (std::size_t k = 0; k < size(); ++k) {
    if (m.contains(k)) out.bits |= std::uint32_t{1} << wider.index_of(relations_[k]);
  }
  return out;
}

SubsetMask LineageSchema::restrict_from(SubsetMask wide_mask, const LineageSchema& wider) const {
  SubsetMask out;
  for (std::size_t k = 0; k < size(); ++k) {
    if (wide_mask.contains(wider.index_of(relations_[k]))) out.bits |= std::uint32_t{1} << k;
  }
  return out;
}

std::string LineageSchema::subset_key(SubsetMask m) const {
  std::string key;
  for (std::size_t k = 0; k < size(); ++k) {
    if (m.contains(k)) key += relations_[k];
  }
  return key;
}

SubsetMask LineageSchema::parse_subset_key(std::string_view key) const {
  // Names appear in canonical order, so a decoding is a strictly increasing
  // sequence of positions. Count decodings to reject ambiguous keys.
  std::vector<SubsetMask> found;
  std::function<void(std::size_t, std::size_t, SubsetMask)> walk = [&](std::size_t pos, std::size_t next,
                                                                       SubsetMask acc) {
    if (found.size() > 1) return;
    if (pos == key.size()) {
      found.push_back(acc);
      return;
    }
    for (std::size_t k = next; k < size(); ++k) {
      const auto& name = relations_[k];
      if (key.substr(pos, name.size()) == name) {
        walk(pos + name.size(), k + 1, acc | SubsetMask{std::uint32_t{1} << k});
      }
    }
  };
  walk(0, 0, SubsetMask{});
  if (found.empty()) {
    throw SchemaError("subset key '" + std::string(key) + "' does not match the lineage schema");
  }
  if (found.size() > 1) {
    throw SchemaError("subset key '" + std::string(key) + "' is ambiguous for this lineage schema");
  }
  return found.front();
}

LineageSchema merge_disjoint(const LineageSchema& left, const LineageSchema& right) {
  if (!left.disjoint_with(right)) {
    throw SelfJoinError("unsupported self-join: inputs share a base relation in their lineage");
  }
  std::vector<std::string> all = left.relations();
  all.insert(all.end(), right.relations().begin(), right.relations().end());
  return LineageSchema(std::move(all));
}

SubsetMask common_lineage(const Lineage& t, const Lineage& u) {
  if (t.ids.size() != u.ids.size()) {
    throw SchemaError("common_lineage: lineages of different length (" + std::to_string(t.ids.size()) +
                      " vs " + std::to_string(u.ids.size()) + ")");
  }
  SubsetMask m;
  for (std::size_t k = 0; k < t.ids.size(); ++k) {
    if (t.ids[k] == u.ids[k]) m.bits |= std::uint32_t{1} << k;
  }
  return m;
}

Lineage concat_lineage(const Lineage& left, const LineageSchema& left_schema, const Lineage& right,
                       const LineageSchema& right_schema, const LineageSchema& merged) {
  Lineage out;
  out.ids.resize(merged.size());
  for (std::size_t k = 0; k < left_schema.size(); ++k) {
    out.ids[merged.index_of(left_schema.relation(k))] = left.ids[k];
  }
  for (std::size_t k = 0; k < right_schema.size(); ++k) {
    out.ids[merged.index_of(right_schema.relation(k))] = right.ids[k];
  }
  return out;
}

std::vector<std::int64_t> project(const Lineage& t, SubsetMask m) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (std::size_t k = 0; k < t.ids.size(); ++k) {
    if (m.contains(k)) out.push_back(t.ids[k]);
  }
  return out;
}

std::size_t LineageHash::operator()(const Lineage& l) const noexcept {
  std::uint64_t h = 0x51ed270b27a4f1c3ULL;
  for (auto id : l.ids) h = mix64(h ^ static_cast<std::uint64_t>(id));
  return static_cast<std::size_t>(h);
}

}  // namespace gus
