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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbr/candidates.hpp"
#include "kbr/cop_model.hpp"
#include "kbr/solver.hpp"
#include "kbr/transform.hpp"

namespace kbr {

struct RefactorConfig {
  std::size_t min_body = 2;
  std::size_t max_body = 3;
  std::optional<std::size_t> max_levels;
  SolverBudget budget;
  bool enforce_predicate_cap = false;
  bool fallback_on_no_gain = true;
  bool prune = true;
  /// See SearchSpaceOptions::mixed_levels.
  bool mixed_levels = false;
  bool trim_heads = true;
  bool redundancy = true;
  std::size_t max_options_per_clause = 500;
  UnfoldOptions unfold;
  /// Keep the text dump of the model in the result.
  bool dump_model = false;
};

struct HypothesisSpaceRow {
  std::size_t predicates = 0;
  std::size_t body_length = 0;
  std::size_t clauses = 0;
  double log_size = 0;
};

struct RefactorReport {
  std::size_t original_literals = 0;
  std::size_t unfolded_literals = 0;
  std::size_t refactored_literals = 0;
  std::size_t original_predicates = 0;
  std::size_t refactored_predicates = 0;
  std::size_t invented_predicates = 0;
  std::size_t unfolded_clauses = 0;
  std::size_t candidates = 0;
  std::size_t model_vars = 0;
  std::size_t model_constraints = 0;
  std::vector<LevelStats> levels;
  std::string stop_reason;
  SolveTrace trace;
  std::int64_t objective = 0;
  ObjectiveBreakdown breakdown;
  bool equivalence_verified = false;
  bool no_gain = false;
  HypothesisSpaceRow hypothesis_before;
  HypothesisSpaceRow hypothesis_after;
};

struct RefactorResult {
  Program program;
  RefactorReport report;
  std::string model_dump;
};

/// unfold, build the search space, encode, solve, decode, verify. Throws
/// VerificationError if the result is not syntactically equivalent to `p`.
RefactorResult refactor(const Program& p, const RefactorConfig& cfg = {});

/// Greedy deduplication: repeatedly folds every disjoint occurrence of the
/// largest connected sub-body whose folding shrinks the program into a new
/// support clause.
Program remove_redundancy_baseline(const Program& p, std::size_t min_size = 2,
                                   std::size_t max_size = 3);

/// Drops support-head arguments that every call site fills with a variable
/// used nowhere else in the calling clause. Preserves syntactic equivalence.
Program trim_support_heads(const Program& p);

/// Natural log of binomial(p^l, m).
double hypothesis_space_size(std::uint64_t p, std::uint64_t l, std::uint64_t m);

/// Predicate count, longest body and clause count of `p`, with the log size.
HypothesisSpaceRow hypothesis_row(const Program& p);

/// Key-value text with a per-level table.
std::string render_report(const RefactorReport& r);
/// One JSON record per line: summary, levels, trace.
std::string report_records(const RefactorReport& r);

}  // namespace kbr
