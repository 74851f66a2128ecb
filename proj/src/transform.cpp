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


#include "kbr/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "kbr/clause_ops.hpp"
#include "kbr/error.hpp"
#include "kbr/matching.hpp"

namespace kbr {
namespace {

// Names no parsed variable can have, so renaming apart never captures.
Symbol internal_variable(std::size_t k) {
  static thread_local std::vector<Symbol> names;
  while (names.size() <= k) names.emplace_back("$v" + std::to_string(names.size()));
  return names[k];
}

class Unfolder {
 public:
  Unfolder(const Program& p, const UnfoldOptions& opts) : p_(p), opts_(opts) {
    for (std::size_t i = 0; i < p.clauses.size(); ++i)
      defs_[p.clauses[i].head.predicate].push_back(i);
  }

  void check_call_graph() const {
    enum class Mark { Fresh, Active, Done };
    std::unordered_map<Symbol, Mark> mark;
    std::vector<Symbol> path;
    std::function<void(Symbol)> visit = [&](Symbol pred) {
      mark[pred] = Mark::Active;
      path.push_back(pred);
      for (std::size_t ci : definitions(pred)) {
        for (const auto& lit : p_.clauses[ci].body) {
          Symbol q = lit.predicate;
          if (p_.registry.is_primitive(q)) continue;
          if (definitions(q).empty())
            throw MissingDefinitionError("predicate " + std::string(q.str()) + "/" +
                                         std::to_string(lit.arity()) +
                                         " is called by " + std::string(pred.str()) +
                                         " but has no clauses");
          auto m = mark[q];
          if (m == Mark::Active) {
            std::string cycle;
            auto start = std::find(path.begin(), path.end(), q);
            for (auto it = start; it != path.end(); ++it)
              cycle += std::string(it->str()) + " -> ";
            cycle += std::string(q.str());
            throw CycleError("recursive non-primitive predicates: " + cycle);
          }
          if (m == Mark::Fresh) visit(q);
        }
      }
      path.pop_back();
      mark[pred] = Mark::Done;
    };
    for (const auto& c : p_.clauses) {
      Symbol h = c.head.predicate;
      if (p_.registry.is_task(h) && mark[h] == Mark::Fresh) visit(h);
    }
  }

  UnfoldedProgram run() {
    check_call_graph();
    UnfoldedProgram out;
    out.registry = p_.registry;
    for (std::size_t i = 0; i < p_.clauses.size(); ++i) {
      const Clause& c = p_.clauses[i];
      auto role = p_.registry.role(c.head.predicate);
      if (role == Role::Primitive) {
        out.passthrough.push_back(c);
      } else if (role == Role::Task) {
        next_var_ = 0;
        expand(rename_apart(c), 0, i, out);
      }
    }
    return out;
  }

 private:
  const std::vector<std::size_t>& definitions(Symbol pred) const {
    static const std::vector<std::size_t> kNone;
    auto it = defs_.find(pred);
    return it == defs_.end() ? kNone : it->second;
  }

  Clause rename_apart(const Clause& c) {
    Substitution s;
    for (Symbol v : variables_of(c)) s.emplace(v, Term::variable(internal_variable(next_var_++)));
    return substitute(c, s);
  }

  void expand(const Clause& cur, std::size_t from, std::size_t origin,
              UnfoldedProgram& out) {
    std::size_t pos = from;
    while (pos < cur.body.size() && p_.registry.is_primitive(cur.body[pos].predicate))
      ++pos;
    if (pos == cur.body.size()) {
      if (out.clauses.size() >= opts_.max_clauses)
        throw LimitError("unfolding produces more than " +
                         std::to_string(opts_.max_clauses) + " clauses");
      out.clauses.push_back(with_canonical_variables(cur));
      out.origin.push_back(origin);
      return;
    }
    const Atom& call = cur.body[pos];
    for (std::size_t di : definitions(call.predicate)) {
      std::size_t saved = next_var_;
      Clause def = rename_apart(p_.clauses[di]);
      auto mgu = unify(call, def.head);
      if (mgu) {
        Clause next{cur.head, {}};
        next.body.reserve(cur.body.size() + def.body.size());
        next.body.insert(next.body.end(), cur.body.begin(), cur.body.begin() + pos);
        next.body.insert(next.body.end(), def.body.begin(), def.body.end());
        next.body.insert(next.body.end(), cur.body.begin() + pos + 1, cur.body.end());
        expand(substitute(next, *mgu), pos, origin, out);
      }
      next_var_ = saved;
    }
  }

  const Program& p_;
  const UnfoldOptions& opts_;
  std::unordered_map<Symbol, std::vector<std::size_t>> defs_;
  std::size_t next_var_ = 0;
};

Term walk(const Term& t, const Substitution& s) {
  const Term* cur = &t;
  while (cur->is_variable()) {
    auto it = s.find(cur->name());
    if (it == s.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs(Symbol v, const Term& t, const Substitution& s) {
  Term w = walk(t, s);
  if (w.is_variable()) return w.name() == v;
  for (const auto& a : w.args())
    if (occurs(v, a, s)) return true;
  return false;
}

bool unify_terms(const Term& a, const Term& b, Substitution& s) {
  Term x = walk(a, s);
  Term y = walk(b, s);
  if (x.is_variable() && y.is_variable() && x.name() == y.name()) return true;
  if (x.is_variable()) {
    if (occurs(x.name(), y, s)) return false;
    s.emplace(x.name(), y);
    return true;
  }
  if (y.is_variable()) return unify_terms(y, x, s);
  if (x.kind() != y.kind() || x.name() != y.name() ||
      x.args().size() != y.args().size())
    return false;
  for (std::size_t i = 0; i < x.args().size(); ++i)
    if (!unify_terms(x.args()[i], y.args()[i], s)) return false;
  return true;
}

Term resolve(const Term& t, const Substitution& s) {
  Term w = walk(t, s);
  if (!w.is_compound()) return w;
  std::vector<Term> args;
  for (const auto& a : w.args()) args.push_back(resolve(a, s));
  return Term::compound(w.name(), std::move(args));
}

struct Occurrence {
  LiteralSubset literals;
  Atom head;
};

// Maximal sets of pairwise disjoint occurrences (Bron-Kerbosch with pivot on
// the compatibility graph).
class DisjointSets {
 public:
  DisjointSets(const std::vector<Occurrence>& occ, std::size_t limit)
      : limit_(limit), compatible_(occ.size(), std::vector<bool>(occ.size())) {
    for (std::size_t i = 0; i < occ.size(); ++i)
      for (std::size_t j = 0; j < occ.size(); ++j)
        compatible_[i][j] = i != j && disjoint(occ[i].literals, occ[j].literals);
  }

  std::vector<std::vector<std::size_t>> run() {
    std::vector<std::size_t> r, p, x;
    for (std::size_t i = 0; i < compatible_.size(); ++i) p.push_back(i);
    search(r, p, x);
    return std::move(out_);
  }

 private:
  static bool disjoint(const LiteralSubset& a, const LiteralSubset& b) {
    for (std::size_t x : a)
      if (std::find(b.begin(), b.end(), x) != b.end()) return false;
    return true;
  }

  void search(std::vector<std::size_t>& r, std::vector<std::size_t> p,
              std::vector<std::size_t> x) {
    if (out_.size() >= limit_) return;
    if (p.empty()) {
      if (x.empty()) {
        auto sorted = r;
        std::sort(sorted.begin(), sorted.end());
        out_.push_back(std::move(sorted));
      }
      return;
    }
    std::size_t pivot = p.front();
    std::size_t best = 0;
    for (const auto* set : {&p, &x})
      for (std::size_t u : *set) {
        std::size_t n = 0;
        for (std::size_t v : p) n += compatible_[u][v];
        if (n >= best) {
          best = n;
          pivot = u;
        }
      }
    std::vector<std::size_t> branch;
    for (std::size_t v : p)
      if (!compatible_[pivot][v]) branch.push_back(v);
    for (std::size_t v : branch) {
      std::vector<std::size_t> np, nx;
      for (std::size_t u : p)
        if (compatible_[v][u]) np.push_back(u);
      for (std::size_t u : x)
        if (compatible_[v][u]) nx.push_back(u);
      r.push_back(v);
      search(r, std::move(np), std::move(nx));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }

  std::size_t limit_;
  std::vector<std::vector<bool>> compatible_;
  std::vector<std::vector<std::size_t>> out_;
};

bool match_ground(const Term& pattern, const Term& ground, Substitution& s) {
  if (pattern.is_variable()) {
    auto [it, inserted] = s.emplace(pattern.name(), ground);
    return inserted || it->second == ground;
  }
  if (pattern.kind() != ground.kind() || pattern.name() != ground.name() ||
      pattern.args().size() != ground.args().size())
    return false;
  for (std::size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_ground(pattern.args()[i], ground.args()[i], s)) return false;
  return true;
}

}  // namespace

std::size_t UnfoldedProgram::size() const {
  std::size_t n = 0;
  for (const auto& c : clauses) n += c.size();
  for (const auto& c : passthrough) n += c.size();
  return n;
}

Program UnfoldedProgram::to_program() const {
  Program p;
  p.registry = registry;
  p.clauses = clauses;
  p.clauses.insert(p.clauses.end(), passthrough.begin(), passthrough.end());
  return p;
}

UnfoldedProgram unfold(const Program& p, const UnfoldOptions& opts) {
  return Unfolder(p, opts).run();
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_terms(a.args[i], b.args[i], s)) return std::nullopt;
  Substitution resolved;
  for (const auto& [v, t] : s) resolved.emplace(v, resolve(t, s));
  return resolved;
}

std::vector<Clause> fold_clause(const Clause& c, const Clause& support,
                                std::size_t max_results) {
  if (support.body.empty()) return {};
  auto body_vars = variables_of(support.body);
  auto head_vars = variables_of(support.head);
  for (Symbol v : head_vars)
    if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end()) return {};
  std::vector<Symbol> locals;
  for (Symbol v : body_vars)
    if (std::find(head_vars.begin(), head_vars.end(), v) == head_vars.end())
      locals.push_back(v);

  std::vector<Occurrence> occ;
  Renaming r;
  for_each_embedding(support.body, c.body, r, [&](const auto& assignment,
                                                  const Renaming& ren) {
    LiteralSubset lits(assignment.begin(), assignment.end());
    std::sort(lits.begin(), lits.end());
    if (!locals.empty()) {
      std::vector<Symbol> outside = variables_of(c.head);
      for (std::size_t i = 0; i < c.body.size(); ++i)
        if (!std::binary_search(lits.begin(), lits.end(), i))
          for (const auto& t : c.body[i].args) collect_variables(t, outside);
      for (Symbol l : locals) {
        Symbol image = *ren.lookup(l);
        if (std::find(outside.begin(), outside.end(), image) != outside.end())
          return true;
      }
    }
    Substitution s;
    for (const auto& [from, to] : ren.pairs()) s.emplace(from, Term::variable(to));
    Occurrence o{std::move(lits), substitute(support.head, s)};
    bool dup = std::any_of(occ.begin(), occ.end(), [&](const Occurrence& e) {
      return e.literals == o.literals && e.head == o.head;
    });
    if (!dup) occ.push_back(std::move(o));
    return true;
  });
  if (occ.empty()) return {};

  std::vector<Clause> out;
  for (const auto& set : DisjointSets(occ, max_results).run()) {
    std::vector<int> owner(c.body.size(), -1);
    for (std::size_t k : set)
      for (std::size_t i : occ[k].literals) owner[i] = static_cast<int>(k);
    Clause folded{c.head, {}};
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (owner[i] < 0) {
        folded.body.push_back(c.body[i]);
      } else if (occ[owner[i]].literals.front() == i) {
        folded.body.push_back(occ[owner[i]].head);
      }
    }
    if (std::find(out.begin(), out.end(), folded) == out.end())
      out.push_back(std::move(folded));
  }
  return out;
}

bool same_clause_multiset(const std::vector<Clause>& a, const std::vector<Clause>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<std::size_t, std::vector<const Clause*>> buckets;
  for (const auto& c : b) buckets[variant_hash(c)].push_back(&c);
  for (const auto& c : a) {
    auto it = buckets.find(variant_hash(c));
    if (it == buckets.end()) return false;
    auto& bucket = it->second;
    auto m = std::find_if(bucket.begin(), bucket.end(),
                          [&](const Clause* x) { return variant_equal(c, *x); });
    if (m == bucket.end()) return false;
    bucket.erase(m);
  }
  return true;
}

bool syntactic_equiv(const Program& a, const Program& b, const UnfoldOptions& opts) {
  if (a.registry.with_role(Role::Task) != b.registry.with_role(Role::Task))
    return false;
  UnfoldedProgram ua = unfold(a, opts);
  UnfoldedProgram ub = unfold(b, opts);
  return same_clause_multiset(ua.clauses, ub.clauses) &&
         same_clause_multiset(ua.passthrough, ub.passthrough);
}

std::set<Atom> restricted_consequences(const Program& p, const std::set<Symbol>& tasks,
                                       std::optional<std::size_t> depth,
                                       const std::optional<std::vector<Term>>& domain) {
  if (!depth && !domain)
    throw DomainError("bottom-up evaluation needs a constant domain or a depth bound");
  std::set<Atom> facts;
  for (std::size_t round = 0; !depth || round < *depth; ++round) {
    std::set<Atom> fresh;
    for (const auto& c : p.clauses) {
      std::function<void(std::size_t, Substitution&)> join =
          [&](std::size_t k, Substitution& s) {
            if (k == c.body.size()) {
              std::vector<Substitution> groundings{s};
              for (Symbol v : variables_of(c.head)) {
                if (s.count(v)) continue;
                if (!domain)
                  throw DomainError("head variable of " +
                                    std::string(c.head.predicate.str()) +
                                    " is not bound by the body");
                std::vector<Substitution> next;
                for (const auto& g : groundings)
                  for (const auto& value : *domain) {
                    auto e = g;
                    e.emplace(v, value);
                    next.push_back(std::move(e));
                  }
                groundings = std::move(next);
              }
              for (const auto& g : groundings) {
                Atom h = substitute(c.head, g);
                if (!facts.count(h)) fresh.insert(std::move(h));
              }
              return;
            }
            for (const auto& f : facts) {
              if (f.predicate != c.body[k].predicate || f.arity() != c.body[k].arity())
                continue;
              Substitution ext = s;
              bool ok = true;
              for (std::size_t i = 0; ok && i < f.args.size(); ++i)
                ok = match_ground(substitute(c.body[k].args[i], ext), f.args[i], ext);
              if (ok) join(k + 1, ext);
            }
          };
      Substitution empty;
      join(0, empty);
    }
    if (fresh.empty()) break;
    facts.insert(fresh.begin(), fresh.end());
  }
  std::set<Atom> out;
  for (const auto& f : facts)
    if (tasks.count(f.predicate)) out.insert(f);
  return out;
}

}  // namespace kbr
