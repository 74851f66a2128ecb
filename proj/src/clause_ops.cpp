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


#include "kbr/clause_ops.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kbr/error.hpp"
#include "kbr/matching.hpp"

namespace kbr {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

using Occurrences = std::unordered_map<Symbol, std::size_t>;

void count(const Term& t, Occurrences& occ) {
  if (t.is_variable()) {
    ++occ[t.name()];
    return;
  }
  for (const auto& a : t.args()) count(a, occ);
}

std::size_t shape_hash(const Term& t, const Occurrences& occ,
                       const Occurrences& head_occ) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = head_occ.find(t.name());
      std::size_t in_head = it == head_occ.end() ? 0 : it->second;
      return mix(mix(0xa11ce, occ.at(t.name())), in_head);
    }
    case Term::Kind::Constant:
      return mix(0xc0de, t.name().id());
    case Term::Kind::Compound: {
      std::size_t h = mix(0xf00d, t.name().id());
      for (const auto& a : t.args()) h = mix(h, shape_hash(a, occ, head_occ));
      return h;
    }
  }
  return 0;
}

std::size_t shape_hash(const Atom& a, const Occurrences& occ,
                       const Occurrences& head_occ) {
  std::size_t h = mix(a.predicate.id(), a.args.size());
  for (const auto& t : a.args) h = mix(h, shape_hash(t, occ, head_occ));
  return h;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

bool single_component(const std::vector<std::vector<Symbol>>& node_vars) {
  std::size_t n = node_vars.size();
  if (n <= 1) return true;
  UnionFind uf(n);
  std::unordered_map<Symbol, std::size_t> first_owner;
  for (std::size_t i = 0; i < n; ++i) {
    for (Symbol v : node_vars[i]) {
      auto [it, inserted] = first_owner.emplace(v, i);
      if (!inserted) uf.unite(i, it->second);
    }
  }
  std::size_t root = uf.find(0);
  for (std::size_t i = 1; i < n; ++i)
    if (uf.find(i) != root) return false;
  return true;
}

// Enumerates connected induced subgraphs (ESU, Wernicke 2006): each
// connected vertex set is produced exactly once.
class ConnectedSubsets {
 public:
  ConnectedSubsets(const std::vector<Atom>& body, std::size_t min_size,
                   std::size_t max_size)
      : min_(min_size), max_(max_size), adj_(body.size()) {
    std::vector<std::vector<Symbol>> vars(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) vars[i] = variables_of(body[i]);
    for (std::size_t i = 0; i < body.size(); ++i)
      for (std::size_t j = i + 1; j < body.size(); ++j)
        if (shares(vars[i], vars[j])) {
          adj_[i].push_back(j);
          adj_[j].push_back(i);
        }
  }

  std::vector<LiteralSubset> run() {
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      std::vector<std::size_t> ext;
      for (std::size_t u : adj_[v])
        if (u > v) ext.push_back(u);
      LiteralSubset sub{v};
      extend(sub, ext, v);
    }
    std::sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return std::move(out_);
  }

 private:
  static bool shares(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    for (Symbol x : a)
      if (std::find(b.begin(), b.end(), x) != b.end()) return true;
    return false;
  }

  bool in_closed_neighbourhood(std::size_t u, const LiteralSubset& sub) const {
    for (std::size_t s : sub) {
      if (s == u) return true;
      if (std::find(adj_[s].begin(), adj_[s].end(), u) != adj_[s].end()) return true;
    }
    return false;
  }

  void extend(LiteralSubset& sub, std::vector<std::size_t> ext, std::size_t root) {
    if (sub.size() >= min_) {
      LiteralSubset sorted = sub;
      std::sort(sorted.begin(), sorted.end());
      out_.push_back(std::move(sorted));
    }
    if (sub.size() == max_) return;
    while (!ext.empty()) {
      std::size_t w = ext.back();
      ext.pop_back();
      std::vector<std::size_t> next = ext;
      for (std::size_t u : adj_[w]) {
        if (u <= root || in_closed_neighbourhood(u, sub)) continue;
        if (std::find(next.begin(), next.end(), u) == next.end()) next.push_back(u);
      }
      sub.push_back(w);
      extend(sub, std::move(next), root);
      sub.pop_back();
    }
  }

  std::size_t min_;
  std::size_t max_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<LiteralSubset> out_;
};

std::string canonical_variable_name(std::size_t index) {
  std::string name(1, static_cast<char>('A' + index % 26));
  if (index >= 26) name += std::to_string(index / 26);
  return name;
}

void shape_string(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      out += '_';
      return;
    case Term::Kind::Constant:
      out += t.name().str();
      return;
    case Term::Kind::Compound:
      out += t.name().str();
      out += '(';
      for (const auto& a : t.args()) {
        shape_string(a, out);
        out += ',';
      }
      out += ')';
      return;
  }
}

}  // namespace

bool variant_equal(const Clause& c1, const Clause& c2) {
  if (c1.body.size() != c2.body.size()) return false;
  if (c1.head.predicate != c2.head.predicate ||
      c1.head.args.size() != c2.head.args.size())
    return false;
  if (variant_hash(c1) != variant_hash(c2)) return false;
  Renaming r;
  if (!match_renaming(c1.head, c2.head, r)) return false;
  bool found = false;
  for_each_embedding(c1.body, c2.body, r, [&](const auto&, const auto&) {
    found = true;
    return false;
  });
  return found;
}

bool variant_equal(const std::vector<Atom>& b1, const std::vector<Atom>& b2) {
  static const Symbol kDummy("$body");
  return variant_equal(Clause{Atom{kDummy, {}}, b1}, Clause{Atom{kDummy, {}}, b2});
}

std::size_t variant_hash(const Clause& c) {
  Occurrences occ;
  Occurrences head_occ;
  for (const auto& t : c.head.args) count(t, head_occ);
  occ = head_occ;
  for (const auto& a : c.body)
    for (const auto& t : a.args) count(t, occ);
  std::vector<std::size_t> shapes;
  shapes.reserve(c.body.size());
  for (const auto& a : c.body) shapes.push_back(shape_hash(a, occ, head_occ));
  std::sort(shapes.begin(), shapes.end());
  std::size_t h = shape_hash(c.head, occ, head_occ);
  for (std::size_t s : shapes) h = mix(h, s);
  return mix(h, c.body.size());
}

std::size_t variant_hash(const std::vector<Atom>& body) {
  static const Symbol kDummy("$body");
  return variant_hash(Clause{Atom{kDummy, {}}, body});
}

bool connected(const Clause& c) {
  std::vector<std::vector<Symbol>> nodes;
  auto head_vars = variables_of(c.head);
  if (!head_vars.empty()) nodes.push_back(std::move(head_vars));
  for (const auto& a : c.body) nodes.push_back(variables_of(a));
  return single_component(nodes);
}

bool connected(const std::vector<Atom>& literals) {
  std::vector<std::vector<Symbol>> nodes;
  for (const auto& a : literals) nodes.push_back(variables_of(a));
  return single_component(nodes);
}

std::vector<LiteralSubset> connected_power_set(const Clause& c) {
  if (c.body.size() > kFullPowerSetCap)
    throw LimitError("body of " + std::to_string(c.body.size()) +
                     " literals exceeds the power-set cap of " +
                     std::to_string(kFullPowerSetCap) +
                     "; enumerate with a subset-size bound instead");
  return connected_power_set(c.body, 1, c.body.size());
}

std::vector<LiteralSubset> connected_power_set(const std::vector<Atom>& body,
                                               std::size_t min_size,
                                               std::size_t max_size) {
  if (body.empty() || max_size == 0 || min_size > max_size) return {};
  return ConnectedSubsets(body, std::max<std::size_t>(min_size, 1), max_size).run();
}

std::vector<Atom> select(const std::vector<Atom>& body, const LiteralSubset& s) {
  std::vector<Atom> out;
  out.reserve(s.size());
  for (std::size_t i : s) out.push_back(body[i]);
  return out;
}

Term substitute(const Term& t, const Substitution& s) {
  if (t.is_variable()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  if (t.is_constant()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, s));
  return Term::compound(t.name(), std::move(args));
}

Atom substitute(const Atom& a, const Substitution& s) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(substitute(t, s));
  return out;
}

Clause substitute(const Clause& c, const Substitution& s) {
  Clause out{substitute(c.head, s), {}};
  out.body.reserve(c.body.size());
  for (const auto& a : c.body) out.body.push_back(substitute(a, s));
  return out;
}

Clause with_canonical_variables(const Clause& c) {
  static thread_local std::vector<Symbol> names;
  auto vars = variables_of(c);
  while (names.size() < vars.size())
    names.emplace_back(canonical_variable_name(names.size()));
  Substitution s;
  for (std::size_t i = 0; i < vars.size(); ++i)
    s.emplace(vars[i], Term::variable(names[i]));
  return substitute(c, s);
}

std::unordered_map<Symbol, std::size_t> variable_occurrences(const Clause& c) {
  Occurrences occ;
  for (const auto& t : c.head.args) count(t, occ);
  for (const auto& a : c.body)
    for (const auto& t : a.args) count(t, occ);
  return occ;
}

std::vector<Atom> canonically_sorted(const std::vector<Atom>& body) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    std::string key(body[i].predicate.str());
    key += '/';
    key += std::to_string(body[i].arity());
    key += '(';
    for (const auto& t : body[i].args) {
      shape_string(t, key);
      key += ',';
    }
    keys.emplace_back(std::move(key), i);
  }
  std::stable_sort(keys.begin(), keys.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Atom> out;
  out.reserve(body.size());
  for (const auto& k : keys) out.push_back(body[k.second]);
  return out;
}

}  // namespace kbr
