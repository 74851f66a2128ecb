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

namespace kbr {

inline constexpr std::size_t kNoVar = static_cast<std::size_t>(-1);

enum class VarKind : std::uint8_t { SC, FOLD, LEVEL, SELECT, RED };

std::string_view to_string(VarKind kind);

struct VarInfo {
  VarKind kind = VarKind::SC;
  /// SC: candidate. FOLD/SELECT: clause, level, option. LEVEL: clause, level.
  /// RED: group.
  std::size_t a = 0, b = 0, c = 0;
};

struct Lit {
  std::uint32_t var = 0;
  bool negated = false;
};

struct PbTerm {
  std::int64_t coef = 1;
  Lit lit;
};

/// sum(coef * lit) >= rhs, with every coef > 0.
struct PbConstraint {
  std::vector<PbTerm> terms;
  std::int64_t rhs = 0;
};

enum class Family : std::uint8_t {
  AtLeastOneFolding,
  ExactlyOneLevel,
  FoldIffSupports,
  CandidateDependency,
  RedundancyLink,
  PredicateCap,
};

std::string_view to_string(Family family);

/// A constraint in its logical form; compiled to PbConstraint rows.
struct FamilyConstraint {
  Family family = Family::ExactlyOneLevel;
  /// FOLD var, SC var, RED var, or clause index depending on the family.
  std::size_t subject = 0;
  std::vector<std::size_t> vars;
  /// PredicateCap bound.
  std::size_t bound = 0;
};

/// Selection variable: clause `clause` uses option `option` at `level`.
/// Implies its LEVEL var and (above level 0) its FOLD var; exactly one per
/// clause is true. Carries the option size as objective weight.
struct SelectVar {
  std::size_t var = kNoVar;
  std::size_t clause = 0;
  std::size_t level = 0;
  std::size_t option = 0;
  std::size_t level_var = kNoVar;
  std::size_t fold_var = kNoVar;
  std::int64_t weight = 0;
};

struct RedundancyGroup {
  std::size_t var = kNoVar;
  std::vector<Atom> body;
  std::vector<std::size_t> fold_vars;
};

struct ObjectiveTerm {
  std::size_t var = 0;
  std::int64_t weight = 0;
};

enum class SolveStatus : std::uint8_t { Optimal, Feasible, Infeasible, TimeoutBest };

std::string_view to_string(SolveStatus status);

struct Assignment {
  std::vector<char> values;
  std::int64_t objective_value = 0;
  SolveStatus status = SolveStatus::Infeasible;
};

class CopModel {
 public:
  /// Adds the SC var of a candidate with objective weight size(candidate).
  std::size_t add_candidate(std::size_t candidate, std::int64_t weight);
  /// sc => every dep.
  void add_dependency(std::size_t sc_var, std::vector<std::size_t> dep_vars);
  /// New clause with LEVEL var for level 0 and, when `raw_size` is set, a
  /// raw selection option of that size. Returns the clause index.
  std::size_t add_clause(std::optional<std::int64_t> raw_size);
  /// LEVEL var for the next level of `clause`; returns the level number.
  std::size_t add_level(std::size_t clause);
  /// FOLD and SELECT vars of an option at an existing level >= 1, with
  /// fold <=> AND(required). Returns the FOLD var.
  std::size_t add_option(std::size_t clause, std::size_t level, std::int64_t size,
                         std::vector<std::size_t> required_sc_vars);
  /// RED var with red <=> (sum(folds) > 1); weight 1.
  std::size_t add_redundancy(std::vector<std::size_t> fold_vars, std::vector<Atom> body = {});
  /// At most `bound` SC vars true.
  void set_predicate_cap(std::size_t bound);
  /// Adds the per-clause families and compiles everything to PB rows.
  void finalize();

  std::size_t num_vars() const { return vars.size(); }
  std::size_t num_clauses() const { return level_vars.size(); }
  std::int64_t objective_value(const std::vector<char>& values) const;
  std::string var_name(std::size_t v) const;

  std::vector<VarInfo> vars;
  std::vector<std::int64_t> weights;
  std::vector<FamilyConstraint> families;
  std::vector<PbConstraint> constraints;
  std::vector<ObjectiveTerm> objective;
  /// SC var per candidate id (kNoVar when the candidate is absent).
  std::vector<std::size_t> sc_vars;
  std::vector<std::size_t> sc_order;  // SC vars in creation order
  std::vector<std::vector<std::size_t>> level_vars;  // per clause, per level
  std::vector<std::vector<SelectVar>> selects;       // per clause
  std::vector<RedundancyGroup> red_groups;
  /// FOLD var -> required SC vars; SC var -> dependency SC vars.
  std::vector<std::vector<std::size_t>> fold_required;
  std::vector<std::vector<std::size_t>> sc_dependencies;
  bool finalized = false;

 private:
  std::size_t new_var(VarInfo info, std::int64_t weight);
};

struct EncodeOptions {
  std::size_t max_vars = 500000;
  std::size_t max_constraints = 4000000;
  std::size_t max_redundancy_groups = 2000;
  bool redundancy = true;
  /// Upper bound on the number of selected candidates.
  std::optional<std::size_t> predicate_cap;
};

/// Builds the model for a search space. Redundancy groups are the variant
/// classes of connected runs of 2 or more invented-head literals shared by
/// level >= 1 options of at least two clauses. Throws LimitError on size caps.
CopModel encode(const LevelledSearchSpace& space, const UnfoldedProgram& unfolded,
                const EncodeOptions& opts = {});

/// Checks the logical families directly, without the PB rows. On failure
/// `why` names the first violated family.
bool satisfies_families(const CopModel& m, const std::vector<char>& values,
                        std::string* why = nullptr);
/// Checks the compiled PB rows.
bool satisfies_rows(const CopModel& m, const std::vector<char>& values);

/// Size part (selected options and candidates) and redundancy part.
struct ObjectiveBreakdown {
  std::int64_t size = 0;
  std::int64_t redundancy = 0;
};
ObjectiveBreakdown objective_breakdown(const CopModel& m, const std::vector<char>& values);

/// Program made of the selected options and candidates. Throws InternalError
/// when the assignment violates the model.
Program decode(const CopModel& m, const Assignment& a, const LevelledSearchSpace& space,
               const UnfoldedProgram& unfolded);

/// Line-oriented pseudo-Boolean text: variable comments, `min:` line, one
/// constraint per line with negated literals rewritten as (1 - x).
std::string dump_model(const CopModel& m);

}  // namespace kbr
