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


#include <algorithm>
#include <map>
#include <set>

#include "kbr/bench.hpp"

namespace kbr {
namespace {

using Clock = std::chrono::steady_clock;

const State* lookup(const std::vector<std::pair<Symbol, State>>& b, Symbol v) {
  for (const auto& [name, s] : b)
    if (name == v) return &s;
  return nullptr;
}

// p(X1..Xn) :- q(X1..Xn) with distinct variables.
std::optional<Symbol> alias_target(const std::vector<const Clause*>& defs) {
  if (defs.size() != 1) return std::nullopt;
  const Clause& c = *defs.front();
  if (c.body.size() != 1 || c.body[0].args != c.head.args) return std::nullopt;
  std::set<Symbol> seen;
  for (const auto& t : c.head.args)
    if (!t.is_variable() || !seen.insert(t.name()).second) return std::nullopt;
  return c.body[0].predicate;
}

}  // namespace

std::size_t Interpreter::KeyHash::operator()(const Key& k) const noexcept {
  return StateHash{}(k.state) * 1000003u ^ k.pred;
}

Interpreter::Interpreter(Domain d, const Program& bk) : domain_(d) {
  const Program prims = domain_primitives(d);
  for (const auto& [name, e] : prims.registry.entries()) primitive_arity_.emplace(name, e.arity);
  for (const auto& c : bk.clauses)
    if (!primitive_arity_.count(c.head.predicate)) defs_[c.head.predicate].push_back(c);
}

bool Interpreter::known(Symbol pred) const {
  return primitive_arity_.count(pred) || defs_.count(pred);
}

std::size_t Interpreter::arity(Symbol pred) const {
  if (auto it = primitive_arity_.find(pred); it != primitive_arity_.end()) return it->second;
  if (auto it = defs_.find(pred); it != defs_.end()) return it->second.front().head.arity();
  return 0;
}

const std::vector<std::vector<State>>& Interpreter::call(Symbol pred, const State& in) {
  Key key{pred.id(), in};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto& slot = memo_[key];  // empty while being computed, so recursion fails
  std::vector<std::vector<State>> res;
  if (auto it = primitive_arity_.find(pred); it != primitive_arity_.end()) {
    if (it->second == 2) {
      if (auto t = apply_action(domain_, pred.str(), in)) res.push_back({*t});
    } else if (it->second == 1 && holds(domain_, pred.str(), in)) {
      res.push_back({});
    }
  } else if (auto d = defs_.find(pred); d != defs_.end()) {
    for (const auto& c : d->second) {
      if (c.head.args.empty() || !c.head.args[0].is_variable() || c.body.size() > 64) continue;
      Bindings b{{c.head.args[0].name(), in}};
      run_body(c.body, 0, b, [&](const Bindings& full) {
        std::vector<State> tuple;
        for (std::size_t k = 1; k < c.head.args.size(); ++k) {
          const Term& t = c.head.args[k];
          const State* s = t.is_variable() ? lookup(full, t.name()) : nullptr;
          if (!s) return;
          tuple.push_back(*s);
        }
        if (std::find(res.begin(), res.end(), tuple) == res.end()) res.push_back(std::move(tuple));
      });
    }
  }
  slot = std::move(res);
  return slot;
}

void Interpreter::run_body(const std::vector<Atom>& body, std::uint64_t done, Bindings& b,
                           const std::function<void(const Bindings&)>& emit) {
  const std::uint64_t all = body.size() == 64 ? ~0ULL : (1ULL << body.size()) - 1;
  if (done == all) {
    emit(b);
    return;
  }
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (done >> i & 1) continue;
    const Atom& lit = body[i];
    if (lit.args.empty() || !lit.args[0].is_variable()) continue;
    const State* in = lookup(b, lit.args[0].name());
    if (!in) continue;
    const auto& results = call(lit.predicate, *in);
    for (const auto& tuple : results) {
      if (tuple.size() + 1 != lit.args.size()) continue;
      const std::size_t mark = b.size();
      bool ok = true;
      for (std::size_t k = 1; ok && k < lit.args.size(); ++k) {
        const Term& t = lit.args[k];
        if (!t.is_variable()) {
          ok = false;
        } else if (const State* s = lookup(b, t.name())) {
          ok = *s == tuple[k - 1];
        } else {
          b.emplace_back(t.name(), tuple[k - 1]);
        }
      }
      if (ok) run_body(body, done | (1ULL << i), b, emit);
      b.resize(mark);
    }
    return;
  }
}

std::vector<State> Interpreter::run(Symbol pred, const State& in) {
  std::vector<State> out;
  const std::size_t n = arity(pred);
  for (const auto& tuple : call(pred, in)) {
    if (n == 1) return {in};
    if (n == 2) out.push_back(tuple[0]);
  }
  return out;
}

std::vector<Symbol> learner_vocabulary(Domain d, const Program& bk) {
  Program prims = domain_primitives(d);
  std::vector<Symbol> out = prims.registry.with_role(Role::Primitive);
  std::map<Symbol, std::vector<const Clause*>> defs;
  for (const auto& c : bk.clauses)
    if (!prims.registry.contains(c.head.predicate)) defs[c.head.predicate].push_back(&c);
  std::vector<Symbol> names;
  for (const auto& [name, clauses] : defs) {
    std::size_t n = clauses.front()->head.arity();
    if ((n == 1 || n == 2) && !alias_target(clauses)) names.push_back(name);
  }
  std::sort(names.begin(), names.end(), lexical_less);
  out.insert(out.end(), names.begin(), names.end());
  return out;
}

Clause sequence_clause(Symbol head, const std::vector<Symbol>& seq,
                       const std::vector<std::size_t>& arities) {
  Clause c{Atom{head, {}}, {}};
  Symbol a("A"), cur = a;
  std::size_t fresh = 0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (arities[k] == 2) {
      Symbol next("S" + std::to_string(++fresh));
      c.body.push_back(Atom{seq[k], {Term::variable(cur), Term::variable(next)}});
      cur = next;
    } else {
      c.body.push_back(Atom{seq[k], {Term::variable(cur)}});
    }
  }
  Substitution s;
  if (cur != a) s.emplace(cur, Term::variable("B"));
  c.head.args = {Term::variable(a), Term::variable(cur == a ? a : Symbol("B"))};
  return substitute(c, s);
}

std::vector<Clause> chain_clauses(const Clause& c) {
  std::vector<Clause> out;
  Clause cur = c;
  for (std::size_t k = 1; cur.body.size() > 2; ++k) {
    std::vector<Atom> rest(cur.body.begin() + 1, cur.body.end());
    std::vector<Symbol> outside = variables_of(cur.head);
    for (Symbol v : variables_of(cur.body.front()))
      if (std::find(outside.begin(), outside.end(), v) == outside.end()) outside.push_back(v);
    Atom helper{Symbol(std::string(c.head.predicate.str()) + "_" + std::to_string(k)), {}};
    for (Symbol v : variables_of(rest))
      if (std::find(outside.begin(), outside.end(), v) != outside.end())
        helper.args.push_back(Term::variable(v));
    out.push_back(Clause{cur.head, {cur.body.front(), helper}});
    cur = Clause{helper, std::move(rest)};
  }
  out.push_back(std::move(cur));
  return out;
}

SynthResult synthesize(const SynthesisTask& task, const Program& bk,
                       const SynthLimits& limits, std::string_view name) {
  SynthResult r;
  const auto start = Clock::now();
  const auto deadline = start + limits.time;
  Interpreter interp(task.domain, bk);
  std::vector<Symbol> vocab = learner_vocabulary(task.domain, bk);
  std::vector<std::size_t> arity;
  for (Symbol v : vocab) arity.push_back(interp.arity(v));

  using Sets = std::vector<std::vector<State>>;
  std::vector<std::size_t> seq;
  bool stop = false;
  std::function<bool(std::size_t, std::size_t, const Sets&, bool)> dfs =
      [&](std::size_t k, std::size_t depth, const Sets& sets, bool acted) -> bool {
    for (std::size_t v = 0; v < vocab.size(); ++v) {
      if (r.nodes >= limits.max_nodes ||
          ((r.nodes & 1023) == 0 && Clock::now() > deadline)) {
        stop = true;
        return false;
      }
      ++r.nodes;
      Sets next(sets.size());
      bool alive = true;
      for (std::size_t e = 0; alive && e < sets.size(); ++e) {
        for (const State& s : sets[e])
          for (State& t : interp.run(vocab[v], s))
            if (std::find(next[e].begin(), next[e].end(), t) == next[e].end())
              next[e].push_back(std::move(t));
        alive = !next[e].empty();
      }
      if (!alive) continue;
      const bool now_acted = acted || arity[v] == 2;
      seq.push_back(v);
      if (k + 1 == depth) {
        bool all = now_acted;
        for (std::size_t e = 0; all && e < sets.size(); ++e)
          all = std::any_of(next[e].begin(), next[e].end(), [&](const State& s) {
            return outputs_match(task.domain, s, task.examples[e].output);
          });
        if (all) return true;
      } else if (dfs(k + 1, depth, next, now_acted)) {
        return true;
      }
      seq.pop_back();
      if (stop) return false;
    }
    return false;
  };

  Sets initial;
  for (const auto& ex : task.examples) initial.push_back({ex.input});
  for (std::size_t depth = 1; depth <= limits.max_depth && !stop; ++depth) {
    if (dfs(0, depth, initial, false)) {
      r.solved = true;
      std::vector<std::size_t> arities;
      for (std::size_t v : seq) {
        r.sequence.push_back(vocab[v]);
        arities.push_back(arity[v]);
      }
      r.solution = sequence_clause(Symbol(name), r.sequence, arities);
      break;
    }
  }
  r.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

}  // namespace kbr
