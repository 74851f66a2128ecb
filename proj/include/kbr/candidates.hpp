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
#include <set>
#include <string>
#include <vector>

#include "kbr/transform.hpp"

namespace kbr {

/// An invented-predicate clause proposed for selection.
struct CandidateSupportClause {
  std::size_t id = 0;
  Clause clause;
  std::size_t level = 1;
  std::size_t body_size = 0;
  /// Ids of lower-level candidates called from the body (level > 1 only).
  std::vector<std::size_t> dependencies;
  /// Disjoint occurrences across the program; per clause, the best of its
  /// current foldings.
  std::size_t usage = 0;

  std::size_t size() const { return clause.size(); }
};

/// One rewrite of one unfolded clause at a given level.
struct FoldingOption {
  std::size_t clause_index = 0;
  std::size_t level = 0;
  std::vector<Atom> literals;
  /// Candidates whose heads occur in `literals`, sorted.
  std::vector<std::size_t> required;

  /// Literal count including the clause head.
  std::size_t size() const { return literals.size() + 1; }
};

struct LevelStats {
  std::size_t level = 0;
  std::size_t extracted = 0;
  std::size_t after_singletons = 0;
  std::size_t after_unprofitable = 0;
  std::size_t folding_options = 0;
  std::size_t truncated_clauses = 0;
  std::vector<std::string> warnings;
};

struct SearchSpaceOptions {
  std::size_t min_body = 2;
  std::size_t max_body = 3;
  std::optional<std::size_t> max_levels;
  bool prune = true;
  std::size_t max_options_per_clause = 500;
  /// Level L >= 2 bodies may mix level L-1 heads with any other literal
  /// instead of using level L-1 heads only.
  bool mixed_levels = false;
};

struct LevelledSearchSpace {
  /// Surviving candidates; candidates[k].id == k. Grouped by ascending level.
  std::vector<CandidateSupportClause> candidates;
  /// foldings[c][d] lists the options of unfolded clause c at level d.
  /// Level 0 holds exactly the raw clause body.
  std::vector<std::vector<std::vector<FoldingOption>>> foldings;
  std::size_t max_level = 0;
  std::vector<LevelStats> stats;
  std::string stop_reason;

  std::vector<std::size_t> candidates_at(std::size_t level) const;
  std::size_t option_count() const;
};

/// Candidates from the connected body subsets with i <= size <= j. Level-1
/// candidates read every body literal; for higher levels only literals whose
/// predicate is in `allowed` are used. `reserved` names are never reused as
/// invented heads. Ids are positions in the result.
std::vector<CandidateSupportClause> extract_candidates(
    const std::vector<Clause>& p, std::size_t i, std::size_t j, std::size_t level,
    const std::set<Symbol>& allowed = {}, const std::set<Symbol>& reserved = {});

/// Drops candidates with a variable occurring exactly once, head included.
std::vector<CandidateSupportClause> prune_singletons(
    std::vector<CandidateSupportClause> cands);

/// Drops candidates with usage * (size - 1) <= usage + size.
std::vector<CandidateSupportClause> prune_unprofitable(
    std::vector<CandidateSupportClause> cands);

bool is_unprofitable(std::size_t usage, std::size_t size);

/// Alternates extraction, pruning, and folding level by level.
LevelledSearchSpace build_search_space(const UnfoldedProgram& u,
                                       const SearchSpaceOptions& opts = {});

/// Clause obtained by inlining every candidate head in the option, level by
/// level, until only the unfolded clause's predicates remain.
Clause expand_option(const FoldingOption& option, const Atom& head,
                     const LevelledSearchSpace& space);

/// Largest number of pairwise disjoint subsets among `subsets`.
std::size_t max_disjoint(const std::vector<LiteralSubset>& subsets);

}  // namespace kbr
