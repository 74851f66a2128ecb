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


#include <cctype>
#include <sstream>
#include <unordered_map>

#include "kbr/program.hpp"

namespace kbr {
namespace {

using Renaming = std::unordered_map<Symbol, std::string>;

std::string canonical_variable_name(std::size_t index) {
  std::string name(1, static_cast<char>('A' + index % 26));
  if (index >= 26) name += std::to_string(index / 26);
  return name;
}

bool is_plain_constant(std::string_view s) {
  if (s.empty()) return false;
  auto first = static_cast<unsigned char>(s.front());
  bool numeric = std::isdigit(first) || (s.front() == '-' && s.size() > 1);
  for (std::size_t i = numeric && s.front() == '-' ? 1 : 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (numeric ? !std::isdigit(c) : !(std::isalnum(c) || c == '_' || c >= 0x80))
      return false;
  }
  return numeric || std::islower(first) || first >= 0x80;
}

void write_term(std::ostream& os, const Term& t, const Renaming* names) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      if (names) os << names->at(t.name());
      else os << t.name().str();
      return;
    case Term::Kind::Constant: {
      auto s = t.name().str();
      if (is_plain_constant(s)) {
        os << s;
      } else {
        os << '\'';
        for (char c : s) {
          if (c == '\'' || c == '\\') os << '\\';
          os << c;
        }
        os << '\'';
      }
      return;
    }
    case Term::Kind::Compound:
      os << t.name().str() << '(';
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) os << ',';
        write_term(os, t.args()[i], names);
      }
      os << ')';
      return;
  }
}

void write_atom(std::ostream& os, const Atom& a, const Renaming* names) {
  os << a.predicate.str();
  if (a.args.empty()) return;
  os << '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) os << ',';
    write_term(os, a.args[i], names);
  }
  os << ')';
}

void write_clause(std::ostream& os, const Clause& c) {
  Renaming names;
  auto vars = variables_of(c);
  for (std::size_t i = 0; i < vars.size(); ++i)
    names.emplace(vars[i], canonical_variable_name(i));
  write_atom(os, c.head, &names);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    os << (i ? ", " : " :- ");
    write_atom(os, c.body[i], &names);
  }
  os << '.';
}

}  // namespace

std::string render_term(const Term& t) {
  std::ostringstream os;
  write_term(os, t, nullptr);
  return os.str();
}

std::string render_atom(const Atom& a) {
  std::ostringstream os;
  write_atom(os, a, nullptr);
  return os.str();
}

std::string render_clause(const Clause& c) {
  std::ostringstream os;
  write_clause(os, c);
  return os.str();
}

std::string render_program(const Program& p) {
  std::ostringstream os;
  for (Role role : {Role::Primitive, Role::Task}) {
    for (Symbol name : p.registry.with_role(role))
      os << '#' << to_string(role) << ' ' << name.str() << '/'
         << p.registry.find(name)->arity << ".\n";
  }
  for (const auto& c : p.clauses) {
    write_clause(os, c);
    os << '\n';
  }
  return os.str();
}

}  // namespace kbr
