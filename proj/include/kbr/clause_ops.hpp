// Copyright 2026 The kbrefactor Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kbr/term.hpp"

namespace kbr {

/// Sorted body positions identifying a sub-multiset of a clause body.
using LiteralSubset = std::vector<std::size_t>;

/// Body length above which connected_power_set refuses full enumeration.
inline constexpr std::size_t kFullPowerSetCap = 12;

/// True iff a bijective variable renaming maps c1 onto c2, with bodies
/// compared as multisets.
bool variant_equal(const Clause& c1, const Clause& c2);
/// Same, for bare conjunctions.
bool variant_equal(const std::vector<Atom>& b1, const std::vector<Atom>& b2);

/// Hash invariant under variable renaming and body permutation; equal for
/// variant-equal clauses.
std::size_t variant_hash(const Clause& c);
std::size_t variant_hash(const std::vector<Atom>& body);

/// Literal-sharing graph of head and body is a single component. A head
/// without variables is not a node of the graph.
bool connected(const Clause& c);
bool connected(const std::vector<Atom>& literals);

/// All nonempty connected subsets of the body (sharing computed over body
/// literals only). Throws LimitError when the body exceeds kFullPowerSetCap.
std::vector<LiteralSubset> connected_power_set(const Clause& c);

/// Connected subsets with min_size <= |s| <= max_size; no body-length cap.
/// Ordered by size, then lexicographically.
std::vector<LiteralSubset> connected_power_set(const std::vector<Atom>& body,
                                               std::size_t min_size,
                                               std::size_t max_size);

std::vector<Atom> select(const std::vector<Atom>& body, const LiteralSubset& s);

using Substitution = std::unordered_map<Symbol, Term>;

Term substitute(const Term& t, const Substitution& s);
Atom substitute(const Atom& a, const Substitution& s);
Clause substitute(const Clause& c, const Substitution& s);

/// Variables renamed A, B, C, ... in first-occurrence order.
Clause with_canonical_variables(const Clause& c);

/// Occurrence count of each variable across head and body.
std::unordered_map<Symbol, std::size_t> variable_occurrences(const Clause& c);

/// Body sorted by predicate spelling, arity, then argument shape. Stable, so
/// ties keep their original relative order.
std::vector<Atom> canonically_sorted(const std::vector<Atom>& body);

}  // namespace kbr
