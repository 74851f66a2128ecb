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


#include "kbr/program.hpp"

#include <algorithm>
#include <set>

#include "kbr/error.hpp"

namespace kbr {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Primitive: return "primitive";
    case Role::Task: return "task";
    case Role::Support: return "support";
  }
  return "?";
}

void PredicateRegistry::declare(Symbol name, std::size_t arity, Role role) {
  auto [it, inserted] = entries_.try_emplace(name, Entry{arity, role});
  if (inserted) return;
  if (it->second.arity != arity)
    throw ArityError("predicate " + std::string(name.str()) + " used with arity " +
                     std::to_string(arity) + " and " +
                     std::to_string(it->second.arity));
  it->second.role = role;
}

void PredicateRegistry::note_arity(Symbol name, std::size_t arity) {
  if (const Entry* e = find(name); e && e->arity != arity)
    throw ArityError("predicate " + std::string(name.str()) + " used with arity " +
                     std::to_string(arity) + " and " + std::to_string(e->arity));
}

const PredicateRegistry::Entry* PredicateRegistry::find(Symbol name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<Role> PredicateRegistry::role(Symbol name) const {
  if (const Entry* e = find(name)) return e->role;
  return std::nullopt;
}

std::vector<Symbol> PredicateRegistry::with_role(Role role) const {
  std::vector<Symbol> out;
  for (const auto& [name, e] : entries_)
    if (e.role == role) out.push_back(name);
  std::sort(out.begin(), out.end(), lexical_less);
  return out;
}

std::size_t Program::size() const {
  std::size_t n = 0;
  for (const auto& c : clauses) n += c.size();
  return n;
}

std::size_t Program::predicate_count() const {
  std::set<Symbol> seen;
  for (const auto& c : clauses) {
    seen.insert(c.head.predicate);
    for (const auto& a : c.body) seen.insert(a.predicate);
  }
  return seen.size();
}

std::vector<const Clause*> Program::definitions(Symbol name) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (c.head.predicate == name) out.push_back(&c);
  return out;
}

}  // namespace kbr
