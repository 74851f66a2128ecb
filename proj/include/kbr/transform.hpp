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
#include <vector>

#include "kbr/clause_ops.hpp"
#include "kbr/program.hpp"

namespace kbr {

struct UnfoldOptions {
  /// Abort once this many unfolded clauses would be produced.
  std::size_t max_clauses = 10000;
};

/// Task clauses with every non-primitive call inlined.
struct UnfoldedProgram {
  std::vector<Clause> clauses;
  /// origin[k] is the index (in the source program) of the task clause that
  /// clauses[k] was unfolded from.
  std::vector<std::size_t> origin;
  /// Clauses defining primitive predicates (facts, typically); copied as is.
  std::vector<Clause> passthrough;
  PredicateRegistry registry;

  std::size_t size() const;
  /// The unfolded clauses as a program with the same registry.
  Program to_program() const;
};

/// Inlines support and task predicates into every task clause until only
/// primitives remain. One output clause per complete inlining choice, in
/// source clause order, then definition order left to right. Throws
/// CycleError, MissingDefinitionError, or LimitError.
UnfoldedProgram unfold(const Program& p, const UnfoldOptions& opts = {});

/// Most general unifier of two atoms, with occurs check.
std::optional<Substitution> unify(const Atom& a, const Atom& b);

/// Every clause obtained by replacing a maximal set of pairwise disjoint
/// occurrences of `support`'s body in `c` (up to variable renaming) with the
/// matching instance of `support`'s head. Empty when nothing matches.
/// Variables local to the support body must match variables that occur
/// nowhere else in `c`.
std::vector<Clause> fold_clause(const Clause& c, const Clause& support,
                                std::size_t max_results = 1000);

/// unfold(a) and unfold(b) hold the same multiset of clauses up to variable
/// renaming, and both programs declare the same task predicates.
bool syntactic_equiv(const Program& a, const Program& b,
                     const UnfoldOptions& opts = {});

/// Multiset equality up to variant_equal.
bool same_clause_multiset(const std::vector<Clause>& a,
                          const std::vector<Clause>& b);

/// Ground atoms over `tasks` derivable bottom-up. Stops at a fixpoint or
/// after `depth` rounds. Clause heads with variables not bound by the body
/// are grounded over `domain`. Throws DomainError when neither a depth nor
/// a domain is given. Intended as a test oracle on tiny programs.
std::set<Atom> restricted_consequences(
    const Program& p, const std::set<Symbol>& tasks,
    std::optional<std::size_t> depth,
    const std::optional<std::vector<Term>>& domain = std::nullopt);

}  // namespace kbr
