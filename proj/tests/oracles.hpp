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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "kbr/clause_ops.hpp"
#include "kbr/cop_model.hpp"
#include "kbr/program.hpp"
#include "kbr/term.hpp"

// Reference implementations used as test oracles. Each one is written
// independently of the library routine it checks: plain enumeration, no
// shared helpers beyond the term types.
namespace kbr::oracle {

inline Term rename_term(const Term& t, const std::map<Symbol, Symbol>& m) {
  if (t.is_variable()) {
    auto it = m.find(t.name());
    return it == m.end() ? t : Term::variable(it->second);
  }
  if (t.is_constant()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(rename_term(a, m));
  return Term::compound(t.name(), std::move(args));
}

inline Atom rename_atom(const Atom& a, const std::map<Symbol, Symbol>& m) {
  Atom out{a.predicate, {}};
  for (const Term& t : a.args) out.args.push_back(rename_term(t, m));
  return out;
}

/// Tries every bijection between the variable sets.
inline bool variant_equal(const Clause& c1, const Clause& c2) {
  std::vector<Symbol> v1 = variables_of(c1);
  std::vector<Symbol> v2 = variables_of(c2);
  if (v1.size() != v2.size() || c1.body.size() != c2.body.size()) return false;
  std::sort(v2.begin(), v2.end());
  std::vector<Atom> b2 = c2.body;
  std::sort(b2.begin(), b2.end());
  do {
    std::map<Symbol, Symbol> m;
    for (std::size_t k = 0; k < v1.size(); ++k) m[v1[k]] = v2[k];
    if (!(rename_atom(c1.head, m) == c2.head)) continue;
    std::vector<Atom> b1;
    for (const Atom& a : c1.body) b1.push_back(rename_atom(a, m));
    std::sort(b1.begin(), b1.end());
    if (b1 == b2) return true;
  } while (std::next_permutation(v2.begin(), v2.end()));
  return false;
}

/// Connectedness of a literal subset by flood fill over shared variables.
inline bool subset_connected(const std::vector<Atom>& body, std::uint32_t mask) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < body.size(); ++k)
    if (mask >> k & 1u) idx.push_back(k);
  if (idx.empty()) return false;
  std::vector<bool> seen(idx.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t cur = stack.back();
    stack.pop_back();
    std::vector<Symbol> vc = variables_of(body[idx[cur]]);
    for (std::size_t o = 0; o < idx.size(); ++o) {
      if (seen[o]) continue;
      std::vector<Symbol> vo = variables_of(body[idx[o]]);
      bool share = std::any_of(vc.begin(), vc.end(), [&](Symbol s) {
        return std::find(vo.begin(), vo.end(), s) != vo.end();
      });
      if (share) {
        seen[o] = true;
        stack.push_back(o);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

inline std::vector<std::vector<std::size_t>> connected_subsets(const std::vector<Atom>& body) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 1; mask < (1u << body.size()); ++mask) {
    if (!subset_connected(body, mask)) continue;
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < body.size(); ++k)
      if (mask >> k & 1u) s.push_back(k);
    out.push_back(s);
  }
  return out;
}

/// Naive forward chaining: every clause is grounded over the full domain and
/// fired until nothing changes.
inline std::set<Atom> forward_chain(const Program& p, const std::set<Symbol>& tasks,
                                    const std::vector<Term>& domain) {
  std::set<Atom> facts;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Clause& c : p.clauses) {
      std::vector<Symbol> vars = variables_of(c);
      std::vector<std::size_t> pick(vars.size(), 0);
      while (true) {
        Substitution s;
        for (std::size_t k = 0; k < vars.size(); ++k) s.insert_or_assign(vars[k], domain[pick[k]]);
        bool fire = true;
        for (const Atom& a : c.body)
          if (!facts.count(substitute(a, s))) {
            fire = false;
            break;
          }
        if (fire && facts.insert(substitute(c.head, s)).second) changed = true;
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == domain.size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
  }
  std::set<Atom> out;
  for (const Atom& a : facts)
    if (tasks.count(a.predicate)) out.insert(a);
  return out;
}

/// log(binomial(p^l, m)) from an exact big-integer binomial.
inline double log_binomial(std::uint64_t p, std::uint64_t l, std::uint64_t m) {
  using boost::multiprecision::cpp_int;
  cpp_int n = 1;
  for (std::uint64_t k = 0; k < l; ++k) n *= p;
  if (cpp_int(m) > n) return -INFINITY;
  cpp_int num = 1, den = 1;
  for (std::uint64_t k = 0; k < m; ++k) {
    num *= n - k;
    den *= k + 1;
  }
  cpp_int c = num / den;
  boost::multiprecision::cpp_bin_float_100 f(c);
  return static_cast<double>(log(f));
}

struct RandomProgramSpec {
  std::size_t min_clauses = 2, max_clauses = 20;
  std::size_t min_body = 1, max_body = 8;
  std::size_t min_primitives = 3, max_primitives = 8;
  /// Chance that a clause splices in a shared chain.
  double motif_rate = 0.6;
};

/// Task clauses over binary and ternary primitives. A few shared chains are
/// spliced into bodies so that refactoring has something to find.
inline Program random_program(std::mt19937_64& rng, const RandomProgramSpec& spec = {}) {
  auto uni = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::size_t np = uni(spec.min_primitives, spec.max_primitives);
  std::vector<std::pair<std::string, std::size_t>> prims;
  for (std::size_t k = 0; k < np; ++k) prims.emplace_back("p" + std::to_string(k), uni(1, 4) == 1 ? 3 : 2);

  std::string text;
  for (auto& [n, a] : prims) text += "#primitive " + n + "/" + std::to_string(a) + ".\n";
  std::size_t nc = uni(spec.min_clauses, spec.max_clauses);
  for (std::size_t c = 0; c < nc; ++c) text += "#task t" + std::to_string(c) + "/2.\n";

  // Motifs: chains of 2..3 primitive indices.
  std::vector<std::vector<std::size_t>> motifs(uni(1, 3));
  for (auto& m : motifs) {
    m.resize(uni(2, 3));
    for (auto& x : m) x = uni(0, np - 1);
  }

  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t len = uni(spec.min_body, spec.max_body);
    std::vector<std::size_t> seq;
    while (seq.size() < len) {
      if (std::bernoulli_distribution(spec.motif_rate)(rng)) {
        const auto& m = motifs[uni(0, motifs.size() - 1)];
        for (std::size_t x : m)
          if (seq.size() < len) seq.push_back(x);
      } else {
        seq.push_back(uni(0, np - 1));
      }
    }
    // Thread a state chain V0 -> V1 -> ... through the body; ternary
    // literals also read a side variable drawn from {X, W}.
    std::string body;
    std::size_t v = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const auto& [name, arity] = prims[seq[k]];
      std::string in = v == 0 ? "X" : "V" + std::to_string(v);
      std::string out = k + 1 == seq.size() ? "Y" : "V" + std::to_string(v + 1);
      if (!body.empty()) body += ", ";
      if (arity == 3)
        body += name + "(" + (uni(0, 1) ? "X" : "W") + "," + in + "," + out + ")";
      else
        body += name + "(" + in + "," + out + ")";
      ++v;
    }
    text += "t" + std::to_string(c) + "(X,Y) :- " + body + ".\n";
  }
  return parse_program(text);
}

/// Small random model built through the public builder: a few candidates
/// with dependencies, clauses with a raw option and up to two levels of
/// folding options, redundancy groups over random folds, and sometimes a
/// predicate cap. At most `max_core` SC, FOLD and LEVEL variables.
inline CopModel random_model(std::mt19937_64& rng, std::size_t max_core = 24) {
  auto uni = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  while (true) {
    CopModel m;
    std::size_t core = 0;
    std::vector<std::size_t> sc;
    std::size_t nsc = uni(1, 5);
    for (std::size_t k = 0; k < nsc; ++k) sc.push_back(m.add_candidate(k, static_cast<std::int64_t>(uni(2, 5))));
    core += nsc;
    for (std::size_t k = 1; k < nsc; ++k)
      if (uni(0, 2) == 0) m.add_dependency(sc[k], {sc[uni(0, k - 1)]});
    std::vector<std::size_t> folds;
    std::size_t nclauses = uni(1, 3);
    for (std::size_t c = 0; c < nclauses; ++c) {
      std::int64_t raw = static_cast<std::int64_t>(uni(3, 9));
      std::size_t cl = m.add_clause(uni(0, 9) ? std::optional<std::int64_t>(raw) : std::nullopt);
      ++core;
      std::size_t levels = uni(0, 2);
      for (std::size_t l = 0; l < levels; ++l) {
        std::size_t level = m.add_level(cl);
        ++core;
        std::size_t nopts = uni(1, 2);
        for (std::size_t o = 0; o < nopts; ++o) {
          std::vector<std::size_t> req;
          for (std::size_t k = 0; k < nsc; ++k)
            if (uni(0, 2) == 0) req.push_back(sc[k]);
          if (req.empty()) req.push_back(sc[uni(0, nsc - 1)]);
          folds.push_back(m.add_option(cl, level, static_cast<std::int64_t>(uni(1, static_cast<std::size_t>(raw))), req));
          ++core;
        }
      }
    }
    if (folds.size() >= 2) {
      std::size_t nred = uni(0, 2);
      for (std::size_t r = 0; r < nred; ++r) {
        std::vector<std::size_t> fs = folds;
        std::shuffle(fs.begin(), fs.end(), rng);
        fs.resize(std::min(fs.size(), uni(2, 3)));
        m.add_redundancy(fs);
      }
    }
    if (uni(0, 4) == 0) m.set_predicate_cap(uni(0, nsc));
    m.finalize();
    if (core <= max_core) return m;
  }
}

}  // namespace kbr::oracle
