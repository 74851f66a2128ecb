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


#include "kbr/term.hpp"

#include <algorithm>
#include <cctype>

namespace kbr {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::variable(Symbol name) { return Term(Kind::Variable, name, {}); }

Term Term::constant(Symbol name) { return Term(Kind::Constant, name, {}); }

Term Term::compound(Symbol functor, std::vector<Term> args) {
  if (args.empty()) return constant(functor);
  return Term(Kind::Compound, functor, std::move(args));
}

bool Term::is_ground() const {
  if (is_variable()) return false;
  return std::all_of(args_.begin(), args_.end(),
                     [](const Term& t) { return t.is_ground(); });
}

bool operator==(const Term& a, const Term& b) {
  return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.name_ != b.name_) return a.name_ < b.name_;
  return std::lexicographical_compare(a.args_.begin(), a.args_.end(),
                                      b.args_.begin(), b.args_.end());
}

bool operator<(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return std::lexicographical_compare(a.args.begin(), a.args.end(),
                                      b.args.begin(), b.args.end());
}

bool is_variable_name(std::string_view text) {
  if (text.empty()) return false;
  auto c = static_cast<unsigned char>(text.front());
  return std::isupper(c) || c == '_';
}

void collect_variables(const Term& t, std::vector<Symbol>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end())
      out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

std::vector<Symbol> variables_of(const Atom& a) {
  std::vector<Symbol> out;
  for (const auto& t : a.args) collect_variables(t, out);
  return out;
}

std::vector<Symbol> variables_of(const std::vector<Atom>& atoms) {
  std::vector<Symbol> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args) collect_variables(t, out);
  return out;
}

std::vector<Symbol> variables_of(const Clause& c) {
  std::vector<Symbol> out;
  for (const auto& t : c.head.args) collect_variables(t, out);
  for (const auto& a : c.body)
    for (const auto& t : a.args) collect_variables(t, out);
  return out;
}

std::size_t hash_value(const Term& t) {
  std::size_t h = mix(static_cast<std::size_t>(t.kind()), t.name().id());
  for (const auto& a : t.args()) h = mix(h, hash_value(a));
  return h;
}

std::size_t hash_value(const Atom& a) {
  std::size_t h = mix(0x51ed27, a.predicate.id());
  for (const auto& t : a.args) h = mix(h, hash_value(t));
  return h;
}

}  // namespace kbr
