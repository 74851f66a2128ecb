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


#include "kbr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "kbr/clause_ops.hpp"
#include "kbr/error.hpp"

namespace kbr {
namespace {

Program without_support_roles(const PredicateRegistry& reg) {
  Program p;
  for (const auto& [name, e] : reg.entries())
    if (e.role != Role::Support) p.registry.declare(name, e.arity, e.role);
  return p;
}

std::size_t support_predicates(const Program& p) {
  std::set<Symbol> defined;
  for (const auto& c : p.clauses)
    if (p.registry.role(c.head.predicate) == Role::Support) defined.insert(c.head.predicate);
  return defined.size();
}

Symbol fresh_name(const std::string& prefix, std::size_t& ordinal,
                  const std::set<Symbol>& taken) {
  for (;;) {
    Symbol s(prefix + std::to_string(++ordinal));
    if (!taken.count(s)) return s;
  }
}

// Position k of `q` can go when every definition binds it to a variable
// bound in the body and every call passes a variable used only there.
bool droppable(const Program& p, Symbol q, std::size_t k) {
  bool defined = false, called = false;
  for (const auto& c : p.clauses) {
    if (c.head.predicate == q) {
      defined = true;
      const Term& t = c.head.args[k];
      if (!t.is_variable()) return false;
      for (std::size_t i = 0; i < c.head.args.size(); ++i)
        if (i != k && c.head.args[i] == t) return false;
      std::size_t in_body = 0;
      for (const auto& a : c.body)
        for (const auto& x : a.args) {
          std::vector<Symbol> vs;
          collect_variables(x, vs);
          in_body += std::count(vs.begin(), vs.end(), t.name());
        }
      if (in_body == 0) return false;
    }
    bool calls = std::any_of(c.body.begin(), c.body.end(),
                             [&](const Atom& a) { return a.predicate == q; });
    if (!calls) continue;
    called = true;
    auto occ = variable_occurrences(c);
    for (const auto& a : c.body) {
      if (a.predicate != q) continue;
      const Term& t = a.args[k];
      if (!t.is_variable() || occ[t.name()] != 1) return false;
    }
  }
  return defined && called;
}

}  // namespace

Program trim_support_heads(const Program& p) {
  Program out = p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Symbol q : out.registry.with_role(Role::Support)) {
      const auto* e = out.registry.find(q);
      for (std::size_t k = 0; e && k < e->arity; ++k) {
        if (!droppable(out, q, k)) continue;
        auto drop = [&](Atom& a) {
          if (a.predicate == q) a.args.erase(a.args.begin() + static_cast<long>(k));
        };
        for (auto& c : out.clauses) {
          drop(c.head);
          for (auto& a : c.body) drop(a);
        }
        std::size_t arity = e->arity - 1;
        out.registry.erase(q);
        out.registry.declare(q, arity, Role::Support);
        changed = true;
        break;
      }
    }
  }
  return out;
}

double hypothesis_space_size(std::uint64_t p, std::uint64_t l, std::uint64_t m) {
  const long double log_n = static_cast<long double>(l) * std::log(static_cast<long double>(p));
  if (log_n < 60) {
    const long double n = std::round(std::exp(log_n));
    if (static_cast<long double>(m) > n) return -std::numeric_limits<double>::infinity();
    long double acc = 0;
    for (std::uint64_t k = 0; k < m; ++k) acc += std::log(n - static_cast<long double>(k));
    return static_cast<double>(acc - std::lgamma(static_cast<long double>(m) + 1));
  }
  long double acc = 0;
  for (std::uint64_t k = 0; k < m; ++k)
    acc += log_n + std::log1p(-static_cast<long double>(k) / std::exp(log_n));
  return static_cast<double>(acc - std::lgamma(static_cast<long double>(m) + 1));
}

HypothesisSpaceRow hypothesis_row(const Program& p) {
  HypothesisSpaceRow r;
  r.predicates = p.predicate_count();
  r.clauses = p.clauses.size();
  for (const auto& c : p.clauses) r.body_length = std::max(r.body_length, c.body.size());
  if (r.predicates && r.body_length && r.clauses)
    r.log_size = hypothesis_space_size(r.predicates, r.body_length, r.clauses);
  return r;
}

RefactorResult refactor(const Program& p, const RefactorConfig& cfg) {
  if (cfg.min_body < 1 || cfg.min_body > cfg.max_body)
    throw Error("body size window needs 1 <= min-body <= max-body");
  RefactorResult res;
  RefactorReport& r = res.report;
  r.original_literals = p.size();
  r.original_predicates = p.predicate_count();
  r.hypothesis_before = hypothesis_row(p);

  UnfoldedProgram u = unfold(p, cfg.unfold);
  r.unfolded_literals = u.size();
  r.unfolded_clauses = u.clauses.size();

  SearchSpaceOptions so;
  so.min_body = cfg.min_body;
  so.max_body = cfg.max_body;
  so.max_levels = cfg.max_levels;
  so.prune = cfg.prune;
  so.mixed_levels = cfg.mixed_levels;
  so.max_options_per_clause = cfg.max_options_per_clause;
  LevelledSearchSpace space = build_search_space(u, so);
  r.levels = space.stats;
  r.stop_reason = space.stop_reason;
  r.candidates = space.candidates.size();

  EncodeOptions eo;
  eo.redundancy = cfg.redundancy;
  if (cfg.enforce_predicate_cap) eo.predicate_cap = support_predicates(p);
  CopModel model = encode(space, u, eo);
  r.model_vars = model.num_vars();
  r.model_constraints = model.constraints.size();
  if (cfg.dump_model) res.model_dump = dump_model(model);

  SolveResult solved = solve(model, cfg.budget);
  r.trace = solved.trace;
  if (solved.assignment.status == SolveStatus::Infeasible)
    throw InternalError("refactoring model has no feasible assignment");
  r.objective = solved.assignment.objective_value;
  r.breakdown = objective_breakdown(model, solved.assignment.values);

  Program out = decode(model, solved.assignment, space, u);
  if (cfg.trim_heads) out = trim_support_heads(out);
  if (!syntactic_equiv(p, out, cfg.unfold))
    throw VerificationError("refactored program is not syntactically equivalent to its input");
  r.equivalence_verified = true;

  if (out.size() >= p.size() && cfg.fallback_on_no_gain) {
    r.no_gain = true;
    out = p;
  }
  r.refactored_literals = out.size();
  r.refactored_predicates = out.predicate_count();
  for (const auto& c : out.clauses)
    if (c.head.predicate.str().rfind("inv_", 0) == 0 &&
        out.registry.role(c.head.predicate) == Role::Support)
      ++r.invented_predicates;
  r.hypothesis_after = hypothesis_row(out);
  res.program = std::move(out);
  return res;
}

Program remove_redundancy_baseline(const Program& p, std::size_t min_size,
                                   std::size_t max_size) {
  min_size = std::max<std::size_t>(min_size, 2);
  UnfoldedProgram u = unfold(p);
  Program out = without_support_roles(u.registry);
  std::vector<Clause> tasks = u.clauses;
  std::vector<Clause> support;
  std::set<Symbol> taken;
  for (const auto& [name, e] : p.registry.entries()) taken.insert(name);
  std::size_t ordinal = 0;

  for (;;) {
    struct Shared {
      std::vector<Atom> body;
      std::size_t occurrences = 0;
    };
    std::vector<Shared> classes;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
    for (const auto& c : tasks) {
      std::map<std::size_t, std::vector<LiteralSubset>> per_class;
      for (const auto& s : connected_power_set(c.body, min_size, max_size)) {
        auto body = select(c.body, s);
        auto& bucket = by_hash[variant_hash(body)];
        std::size_t k = SIZE_MAX;
        for (std::size_t idx : bucket)
          if (variant_equal(classes[idx].body, body)) {
            k = idx;
            break;
          }
        if (k == SIZE_MAX) {
          k = classes.size();
          bucket.push_back(k);
          classes.push_back({std::move(body), 0});
        }
        per_class[k].push_back(s);
      }
      for (const auto& [k, subsets] : per_class) classes[k].occurrences += max_disjoint(subsets);
    }
    const Shared* pick = nullptr;
    for (const auto& s : classes) {
      if (s.occurrences < 2 || is_unprofitable(s.occurrences, s.body.size() + 1)) continue;
      if (!pick || s.body.size() > pick->body.size() ||
          (s.body.size() == pick->body.size() && s.occurrences > pick->occurrences))
        pick = &s;
    }
    if (!pick) break;

    Atom head{fresh_name("aux_", ordinal, taken), {}};
    taken.insert(head.predicate);
    for (Symbol v : variables_of(pick->body)) head.args.push_back(Term::variable(v));
    Clause def = with_canonical_variables(Clause{head, pick->body});
    for (auto& c : tasks) {
      auto folded = fold_clause(c, def);
      if (folded.empty()) continue;
      auto best = std::min_element(folded.begin(), folded.end(), [](const auto& a, const auto& b) {
        return a.body.size() < b.body.size();
      });
      c = *best;
    }
    out.registry.declare(def.head.predicate, def.head.arity(), Role::Support);
    support.push_back(std::move(def));
  }
  out.clauses = tasks;
  out.clauses.insert(out.clauses.end(), support.begin(), support.end());
  out.clauses.insert(out.clauses.end(), u.passthrough.begin(), u.passthrough.end());
  return trim_support_heads(out);
}

}  // namespace kbr
