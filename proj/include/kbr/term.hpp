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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace kbr {

/// Interned identifier. Comparison and hashing are by intern id, so the
/// ordering of two symbols reflects interning order, not spelling. Use
/// lexical_less() where output must not depend on interning order.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  std::string_view str() const;
  std::uint32_t id() const { return id_; }
  bool empty() const { return id_ == 0; }

  /// A symbol spelled `<prefix><n>` that has never been interned before.
  static Symbol fresh(std::string_view prefix);

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol, Symbol) = default;

 private:
  std::uint32_t id_ = 0;
};

bool lexical_less(Symbol a, Symbol b);

/// Variable, constant, or compound term. Leading uppercase or underscore
/// spells a variable; everything else is a constant or functor.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Constant, Compound };

  static Term variable(Symbol name);
  static Term variable(std::string_view name) { return variable(Symbol(name)); }
  static Term constant(Symbol name);
  static Term constant(std::string_view name) { return constant(Symbol(name)); }
  static Term compound(Symbol functor, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_compound() const { return kind_ == Kind::Compound; }
  Symbol name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }
  bool is_ground() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);

 private:
  Term(Kind kind, Symbol name, std::vector<Term> args)
      : kind_(kind), name_(name), args_(std::move(args)) {}

  Kind kind_ = Kind::Constant;
  Symbol name_;
  std::vector<Term> args_;
};

struct Atom {
  Symbol predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator<(const Atom& a, const Atom& b);
};

/// Definite clause; an empty body is a fact.
struct Clause {
  Atom head;
  std::vector<Atom> body;

  /// Literal count, head included.
  std::size_t size() const { return body.size() + 1; }

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.head == b.head && a.body == b.body;
  }
};

bool is_variable_name(std::string_view text);

/// Distinct variables in first-occurrence order (left to right, depth first).
void collect_variables(const Term& t, std::vector<Symbol>& out);
std::vector<Symbol> variables_of(const Atom& a);
std::vector<Symbol> variables_of(const std::vector<Atom>& atoms);
std::vector<Symbol> variables_of(const Clause& c);

std::size_t hash_value(const Term& t);
std::size_t hash_value(const Atom& a);

}  // namespace kbr

template <>
struct std::hash<kbr::Symbol> {
  std::size_t operator()(kbr::Symbol s) const noexcept {
    return std::hash<std::uint32_t>{}(s.id());
  }
};

template <>
struct std::hash<kbr::Term> {
  std::size_t operator()(const kbr::Term& t) const noexcept {
    return kbr::hash_value(t);
  }
};

template <>
struct std::hash<kbr::Atom> {
  std::size_t operator()(const kbr::Atom& a) const noexcept {
    return kbr::hash_value(a);
  }
};
