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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbr/term.hpp"

namespace kbr {

/// Primitive predicates are user-given base relations and are never inlined.
/// Task predicates carry the semantics to preserve. Support predicates are
/// auxiliary and vanish under unfolding.
enum class Role : std::uint8_t { Primitive, Task, Support };

std::string_view to_string(Role role);

class PredicateRegistry {
 public:
  struct Entry {
    std::size_t arity = 0;
    Role role = Role::Support;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Adds or checks an entry. Throws ArityError on an arity mismatch.
  void declare(Symbol name, std::size_t arity, Role role);
  /// Records arity for a predicate whose role is decided later.
  void note_arity(Symbol name, std::size_t arity);
  void erase(Symbol name) { entries_.erase(name); }

  bool contains(Symbol name) const { return entries_.count(name) != 0; }
  const Entry* find(Symbol name) const;
  std::optional<Role> role(Symbol name) const;
  bool is_primitive(Symbol name) const { return role(name) == Role::Primitive; }
  bool is_task(Symbol name) const { return role(name) == Role::Task; }

  /// Names with the given role, sorted by spelling.
  std::vector<Symbol> with_role(Role role) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<Symbol, Entry>& entries() const { return entries_; }

  friend bool operator==(const PredicateRegistry&,
                         const PredicateRegistry&) = default;

 private:
  std::map<Symbol, Entry> entries_;
};

struct Program {
  std::vector<Clause> clauses;
  PredicateRegistry registry;

  /// Total number of literals, heads included.
  std::size_t size() const;
  /// Distinct predicate symbols occurring anywhere in the clauses.
  std::size_t predicate_count() const;
  /// Clauses whose head predicate is `name`, in program order.
  std::vector<const Clause*> definitions(Symbol name) const;
};

/// Parses the knowledge-base format:
///
///   #primitive place/4.
///   #task pillar/4.
///   pillar(X,Y,E,F) :- place(hor,X,E,E1), right(X,Z), ... .
///
/// `%` starts a comment. Predicates without a directive that head some
/// rule become support predicates; the rest (called only, or defined only
/// by facts) become primitives.
Program parse_program(std::string_view text);

/// Parses a single clause such as "p(X) :- q(X,Y)." (trailing dot optional).
Clause parse_clause(std::string_view text);

/// Role directives for primitive and task predicates, then one clause per
/// line. Variables are renamed A, B, ..., Z, A1, ... in first-occurrence
/// order within each clause.
std::string render_program(const Program& p);
std::string render_clause(const Clause& c);
std::string render_atom(const Atom& a);
std::string render_term(const Term& t);

}  // namespace kbr
