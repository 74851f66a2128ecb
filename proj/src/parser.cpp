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
#include <map>
#include <set>
#include <string>

#include "kbr/error.hpp"
#include "kbr/program.hpp"

namespace kbr {
namespace {

bool is_ident_start(unsigned char c) {
  return std::islower(c) || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

struct Located {
  Atom atom;
  std::size_t line;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, pos_ - line_start_ + 1);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           is_ident_char(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t number() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("expected number");
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  Term term() {
    char c = peek();
    auto uc = static_cast<unsigned char>(c);
    if (c == '\'') return Term::constant(quoted());
    if (std::isdigit(uc) || c == '-') {
      std::size_t start = pos_;
      if (c == '-') ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == start + (c == '-' ? 1 : 0)) fail("expected number");
      return Term::constant(text_.substr(start, pos_ - start));
    }
    if (std::isupper(uc) || c == '_') return Term::variable(word());
    if (!is_ident_start(uc)) fail("expected term");
    Symbol functor(word());
    if (peek() != '(') return Term::constant(functor);
    return Term::compound(functor, arguments());
  }

  Atom atom() {
    char c = peek();
    if (!is_ident_start(static_cast<unsigned char>(c))) fail("expected predicate name");
    Atom a;
    a.predicate = Symbol(word());
    if (peek() == '(') a.args = arguments();
    return a;
  }

 private:
  std::vector<Term> arguments() {
    expect('(');
    std::vector<Term> args;
    args.push_back(term());
    while (peek() == ',') {
      ++pos_;
      args.push_back(term());
    }
    expect(')');
    return args;
  }

  std::string quoted() {
    expect('\'');
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      if (text_[pos_] == '\n') fail("newline in quoted atom");
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated quoted atom");
    ++pos_;
    return out;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        line_start_ = ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

Clause clause_body(Parser& p, Atom head, std::vector<Located>* located) {
  Clause c;
  c.head = std::move(head);
  if (p.accept(":-")) {
    do {
      std::size_t line = p.line();
      c.body.push_back(p.atom());
      if (located) located->push_back({c.body.back(), line});
    } while (p.accept(","));
  }
  return c;
}

void check_arity(std::map<Symbol, std::size_t>& arity, const Atom& a,
                 std::size_t line) {
  auto [it, inserted] = arity.try_emplace(a.predicate, a.arity());
  if (!inserted && it->second != a.arity())
    throw ArityError("line " + std::to_string(line) + ": arity conflict for " +
                     std::string(a.predicate.str()) + ": " +
                     std::to_string(a.arity()) + " vs " +
                     std::to_string(it->second));
}

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  Program prog;
  std::map<Symbol, std::pair<Role, std::size_t>> declared;
  std::vector<Located> occurrences;

  while (!p.at_end()) {
    if (p.peek() == '#') {
      p.expect('#');
      std::size_t line = p.line();
      std::string kind = p.word();
      Role role;
      if (kind == "primitive") role = Role::Primitive;
      else if (kind == "task") role = Role::Task;
      else if (kind == "support") role = Role::Support;
      else p.fail("unknown directive #" + kind);
      Symbol name(p.word());
      p.expect('/');
      std::size_t arity = p.number();
      p.expect('.');
      if (declared.count(name))
        throw RoleError("line " + std::to_string(line) +
                        ": duplicate role declaration for " +
                        std::string(name.str()));
      declared.emplace(name, std::make_pair(role, arity));
      Atom probe{name, std::vector<Term>(arity, Term::constant("_"))};
      occurrences.push_back({std::move(probe), line});
      continue;
    }
    std::size_t line = p.line();
    Atom head = p.atom();
    occurrences.push_back({head, line});
    prog.clauses.push_back(clause_body(p, std::move(head), &occurrences));
    p.expect('.');
  }

  std::map<Symbol, std::size_t> arity;
  for (const auto& occ : occurrences) check_arity(arity, occ.atom, occ.line);

  for (const auto& [name, decl] : declared)
    prog.registry.declare(name, decl.second, decl.first);
  // Predicates defined by at least one rule are support; those defined
  // only by facts are base relations.
  std::set<Symbol> defined;
  for (const auto& c : prog.clauses)
    if (!c.body.empty()) defined.insert(c.head.predicate);
  for (const auto& [name, n] : arity) {
    if (declared.count(name)) continue;
    prog.registry.declare(name, n, defined.count(name) ? Role::Support
                                                       : Role::Primitive);
  }
  return prog;
}

Clause parse_clause(std::string_view text) {
  Parser p(text);
  Atom head = p.atom();
  Clause c = clause_body(p, std::move(head), nullptr);
  if (!p.at_end()) p.expect('.');
  if (!p.at_end()) p.fail("trailing input after clause");
  return c;
}

}  // namespace kbr
