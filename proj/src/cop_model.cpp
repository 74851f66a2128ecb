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


#include "kbr/cop_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "kbr/clause_ops.hpp"
#include "kbr/error.hpp"

namespace kbr {
namespace {

Lit pos(std::size_t v) { return Lit{static_cast<std::uint32_t>(v), false}; }
Lit neg(std::size_t v) { return Lit{static_cast<std::uint32_t>(v), true}; }

void at_least_one(std::vector<PbConstraint>& out, const std::vector<std::size_t>& vars) {
  PbConstraint c;
  for (std::size_t v : vars) c.terms.push_back({1, pos(v)});
  c.rhs = 1;
  out.push_back(std::move(c));
}

void at_most_one(std::vector<PbConstraint>& out, const std::vector<std::size_t>& vars) {
  if (vars.size() < 2) return;
  PbConstraint c;
  for (std::size_t v : vars) c.terms.push_back({1, neg(v)});
  c.rhs = static_cast<std::int64_t>(vars.size()) - 1;
  out.push_back(std::move(c));
}

void implies(std::vector<PbConstraint>& out, std::size_t a, std::size_t b) {
  out.push_back(PbConstraint{{{1, neg(a)}, {1, pos(b)}}, 1});
}

bool value_of(const std::vector<char>& values, std::size_t v) { return values[v] != 0; }

}  // namespace

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::SC: return "sc";
    case VarKind::FOLD: return "fold";
    case VarKind::LEVEL: return "level";
    case VarKind::SELECT: return "select";
    case VarKind::RED: return "red";
  }
  return "?";
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::AtLeastOneFolding: return "AtLeastOneFolding";
    case Family::ExactlyOneLevel: return "ExactlyOneLevel";
    case Family::FoldIffSupports: return "FoldIffSupports";
    case Family::CandidateDependency: return "CandidateDependency";
    case Family::RedundancyLink: return "RedundancyLink";
    case Family::PredicateCap: return "PredicateCap";
  }
  return "?";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeoutBest: return "timeout-best";
  }
  return "?";
}

std::size_t CopModel::new_var(VarInfo info, std::int64_t weight) {
  if (finalized) throw InternalError("model is already finalized");
  vars.push_back(info);
  weights.push_back(weight);
  fold_required.emplace_back();
  sc_dependencies.emplace_back();
  return vars.size() - 1;
}

std::size_t CopModel::add_candidate(std::size_t candidate, std::int64_t weight) {
  std::size_t v = new_var({VarKind::SC, candidate, 0, 0}, weight);
  if (sc_vars.size() <= candidate) sc_vars.resize(candidate + 1, kNoVar);
  sc_vars[candidate] = v;
  sc_order.push_back(v);
  return v;
}

void CopModel::add_dependency(std::size_t sc_var, std::vector<std::size_t> dep_vars) {
  if (dep_vars.empty()) return;
  sc_dependencies[sc_var].insert(sc_dependencies[sc_var].end(), dep_vars.begin(),
                                 dep_vars.end());
  families.push_back({Family::CandidateDependency, sc_var, std::move(dep_vars), 0});
}

std::size_t CopModel::add_clause(std::optional<std::int64_t> raw_size) {
  std::size_t clause = level_vars.size();
  std::size_t l0 = new_var({VarKind::LEVEL, clause, 0, 0}, 0);
  level_vars.push_back({l0});
  selects.emplace_back();
  if (raw_size) {
    SelectVar s;
    s.clause = clause;
    s.level_var = l0;
    s.weight = *raw_size;
    s.var = new_var({VarKind::SELECT, clause, 0, 0}, *raw_size);
    selects[clause].push_back(s);
  }
  return clause;
}

std::size_t CopModel::add_level(std::size_t clause) {
  std::size_t level = level_vars[clause].size();
  level_vars[clause].push_back(new_var({VarKind::LEVEL, clause, level, 0}, 0));
  return level;
}

std::size_t CopModel::add_option(std::size_t clause, std::size_t level, std::int64_t size,
                                 std::vector<std::size_t> required_sc_vars) {
  std::size_t option = 0;
  for (const auto& s : selects[clause]) option += s.level == level;
  std::size_t f = new_var({VarKind::FOLD, clause, level, option}, 0);
  SelectVar s;
  s.clause = clause;
  s.level = level;
  s.option = option;
  s.level_var = level_vars[clause].at(level);
  s.fold_var = f;
  s.weight = size;
  s.var = new_var({VarKind::SELECT, clause, level, option}, size);
  selects[clause].push_back(s);
  fold_required[f] = required_sc_vars;
  families.push_back({Family::FoldIffSupports, f, std::move(required_sc_vars), 0});
  return f;
}

std::size_t CopModel::add_redundancy(std::vector<std::size_t> fold_vars,
                                     std::vector<Atom> body) {
  std::size_t r = new_var({VarKind::RED, red_groups.size(), 0, 0}, 1);
  families.push_back({Family::RedundancyLink, r, fold_vars, 0});
  red_groups.push_back({r, std::move(body), std::move(fold_vars)});
  return r;
}

void CopModel::set_predicate_cap(std::size_t bound) {
  families.push_back({Family::PredicateCap, 0, sc_order, bound});
}

void CopModel::finalize() {
  if (finalized) return;
  for (std::size_t c = 0; c < level_vars.size(); ++c) {
    families.push_back({Family::ExactlyOneLevel, c, level_vars[c], 0});
    std::vector<std::size_t> ys;
    for (const auto& s : selects[c]) ys.push_back(s.var);
    families.push_back({Family::AtLeastOneFolding, c, std::move(ys), 0});
  }
  for (const auto& fam : families) {
    switch (fam.family) {
      case Family::AtLeastOneFolding:
        at_least_one(constraints, fam.vars);
        at_most_one(constraints, fam.vars);
        for (const auto& s : selects[fam.subject]) {
          implies(constraints, s.var, s.level_var);
          if (s.fold_var != kNoVar) implies(constraints, s.var, s.fold_var);
        }
        break;
      case Family::ExactlyOneLevel:
        at_least_one(constraints, fam.vars);
        at_most_one(constraints, fam.vars);
        break;
      case Family::FoldIffSupports: {
        PbConstraint back{{{1, pos(fam.subject)}}, 1};
        for (std::size_t sc : fam.vars) {
          implies(constraints, fam.subject, sc);
          back.terms.push_back({1, neg(sc)});
        }
        constraints.push_back(std::move(back));
        break;
      }
      case Family::CandidateDependency:
        for (std::size_t d : fam.vars) implies(constraints, fam.subject, d);
        break;
      case Family::RedundancyLink: {
        const auto n = static_cast<std::int64_t>(fam.vars.size());
        if (n >= 2) {
          PbConstraint up{{{n - 1, pos(fam.subject)}}, n - 1};
          for (std::size_t f : fam.vars) up.terms.push_back({1, neg(f)});
          constraints.push_back(std::move(up));
        }
        PbConstraint down{{{2, neg(fam.subject)}}, 2};
        for (std::size_t f : fam.vars) down.terms.push_back({1, pos(f)});
        constraints.push_back(std::move(down));
        break;
      }
      case Family::PredicateCap:
        if (fam.vars.size() > fam.bound) {
          PbConstraint c;
          for (std::size_t sc : fam.vars) c.terms.push_back({1, neg(sc)});
          c.rhs = static_cast<std::int64_t>(fam.vars.size() - fam.bound);
          constraints.push_back(std::move(c));
        }
        break;
    }
  }
  for (std::size_t v = 0; v < vars.size(); ++v)
    if (weights[v] != 0) objective.push_back({v, weights[v]});
  finalized = true;
}

std::int64_t CopModel::objective_value(const std::vector<char>& values) const {
  std::int64_t total = 0;
  for (const auto& t : objective)
    if (value_of(values, t.var)) total += t.weight;
  return total;
}

std::string CopModel::var_name(std::size_t v) const {
  const VarInfo& info = vars[v];
  std::string out(to_string(info.kind));
  switch (info.kind) {
    case VarKind::SC:
    case VarKind::RED:
      return out + "(" + std::to_string(info.a) + ")";
    case VarKind::LEVEL:
      return out + "(" + std::to_string(info.a) + "," + std::to_string(info.b) + ")";
    case VarKind::FOLD:
    case VarKind::SELECT:
      return out + "(" + std::to_string(info.a) + "," + std::to_string(info.b) + "," +
             std::to_string(info.c) + ")";
  }
  return out;
}

CopModel encode(const LevelledSearchSpace& space, const UnfoldedProgram& unfolded,
                const EncodeOptions& opts) {
  CopModel m;
  auto check_vars = [&]() {
    if (m.num_vars() > opts.max_vars)
      throw LimitError("model exceeds " + std::to_string(opts.max_vars) + " variables");
  };
  for (const auto& c : space.candidates)
    m.add_candidate(c.id, static_cast<std::int64_t>(c.size()));
  for (const auto& c : space.candidates) {
    std::vector<std::size_t> deps;
    for (std::size_t d : c.dependencies) deps.push_back(m.sc_vars.at(d));
    m.add_dependency(m.sc_vars[c.id], std::move(deps));
  }

  struct Shared {
    std::vector<Atom> body;
    std::vector<std::size_t> folds;
    std::set<std::size_t> clauses;
  };
  std::vector<Shared> shared;
  std::unordered_map<std::size_t, std::vector<std::size_t>> shared_by_hash;
  std::set<Symbol> invented;
  for (const auto& c : space.candidates) invented.insert(c.clause.head.predicate);
  std::size_t red_max = 2;
  for (const auto& c : space.candidates) red_max = std::max(red_max, c.body_size);

  for (std::size_t c = 0; c < unfolded.clauses.size(); ++c) {
    m.add_clause(static_cast<std::int64_t>(unfolded.clauses[c].size()));
    const auto& per_level = space.foldings.at(c);
    for (std::size_t level = 1; level < per_level.size(); ++level) {
      m.add_level(c);
      for (const auto& o : per_level[level]) {
        std::vector<std::size_t> req;
        for (std::size_t id : o.required) req.push_back(m.sc_vars.at(id));
        std::size_t f =
            m.add_option(c, level, static_cast<std::int64_t>(o.size()), std::move(req));
        check_vars();
        if (!opts.redundancy) continue;
        std::vector<Atom> heads;
        for (const auto& a : o.literals)
          if (invented.count(a.predicate)) heads.push_back(a);
        for (const auto& s : connected_power_set(heads, 2, red_max)) {
          auto body = select(heads, s);
          auto& bucket = shared_by_hash[variant_hash(body)];
          std::size_t k = SIZE_MAX;
          for (std::size_t idx : bucket)
            if (variant_equal(shared[idx].body, body)) {
              k = idx;
              break;
            }
          if (k == SIZE_MAX) {
            k = shared.size();
            bucket.push_back(k);
            shared.push_back({std::move(body), {}, {}});
          }
          auto& sh = shared[k];
          if (sh.folds.empty() || sh.folds.back() != f) sh.folds.push_back(f);
          sh.clauses.insert(c);
        }
      }
    }
  }

  std::vector<std::size_t> groups;
  for (std::size_t k = 0; k < shared.size(); ++k)
    if (shared[k].clauses.size() >= 2) groups.push_back(k);
  std::stable_sort(groups.begin(), groups.end(), [&](std::size_t a, std::size_t b) {
    if (shared[a].body.size() != shared[b].body.size())
      return shared[a].body.size() > shared[b].body.size();
    return shared[a].folds.size() > shared[b].folds.size();
  });
  if (groups.size() > opts.max_redundancy_groups) groups.resize(opts.max_redundancy_groups);
  for (std::size_t k : groups) m.add_redundancy(shared[k].folds, shared[k].body);
  check_vars();

  if (opts.predicate_cap) m.set_predicate_cap(*opts.predicate_cap);
  m.finalize();
  if (m.constraints.size() > opts.max_constraints)
    throw LimitError("model exceeds " + std::to_string(opts.max_constraints) +
                     " constraints");
  return m;
}

bool satisfies_families(const CopModel& m, const std::vector<char>& values,
                        std::string* why) {
  auto fail = [&](const FamilyConstraint& f) {
    if (why) *why = std::string(to_string(f.family)) + " on " + m.var_name(f.subject);
    return false;
  };
  if (values.size() != m.num_vars()) {
    if (why) *why = "assignment has the wrong length";
    return false;
  }
  for (const auto& f : m.families) {
    std::size_t count = 0;
    for (std::size_t v : f.vars) count += value_of(values, v);
    const bool all = count == f.vars.size();
    switch (f.family) {
      case Family::AtLeastOneFolding: {
        if (count != 1) {
          if (why) *why = "AtLeastOneFolding on clause " + std::to_string(f.subject);
          return false;
        }
        for (const auto& s : m.selects[f.subject]) {
          if (!value_of(values, s.var)) continue;
          if (!value_of(values, s.level_var) ||
              (s.fold_var != kNoVar && !value_of(values, s.fold_var))) {
            if (why) *why = "AtLeastOneFolding on clause " + std::to_string(f.subject);
            return false;
          }
        }
        break;
      }
      case Family::ExactlyOneLevel:
        if (count != 1) {
          if (why) *why = "ExactlyOneLevel on clause " + std::to_string(f.subject);
          return false;
        }
        break;
      case Family::FoldIffSupports:
        if (value_of(values, f.subject) != all) return fail(f);
        break;
      case Family::CandidateDependency:
        if (value_of(values, f.subject) && !all) return fail(f);
        break;
      case Family::RedundancyLink:
        if (value_of(values, f.subject) != (count > 1)) return fail(f);
        break;
      case Family::PredicateCap:
        if (count > f.bound) {
          if (why) *why = "PredicateCap";
          return false;
        }
        break;
    }
  }
  return true;
}

bool satisfies_rows(const CopModel& m, const std::vector<char>& values) {
  for (const auto& c : m.constraints) {
    std::int64_t lhs = 0;
    for (const auto& t : c.terms)
      if (value_of(values, t.lit.var) != t.lit.negated) lhs += t.coef;
    if (lhs < c.rhs) return false;
  }
  return true;
}

ObjectiveBreakdown objective_breakdown(const CopModel& m, const std::vector<char>& values) {
  ObjectiveBreakdown b;
  for (const auto& t : m.objective) {
    if (!value_of(values, t.var)) continue;
    if (m.vars[t.var].kind == VarKind::RED)
      b.redundancy += t.weight;
    else
      b.size += t.weight;
  }
  return b;
}

Program decode(const CopModel& m, const Assignment& a, const LevelledSearchSpace& space,
               const UnfoldedProgram& unfolded) {
  if (a.status == SolveStatus::Infeasible)
    throw InternalError("cannot decode an infeasible assignment");
  std::string why;
  if (!satisfies_families(m, a.values, &why))
    throw InternalError("solver assignment violates " + why);

  Program out;
  for (const auto& [name, e] : unfolded.registry.entries())
    if (e.role != Role::Support) out.registry.declare(name, e.arity, e.role);
  for (std::size_t c = 0; c < m.num_clauses(); ++c) {
    for (const auto& s : m.selects[c]) {
      if (!value_of(a.values, s.var)) continue;
      const auto& o = space.foldings.at(c).at(s.level).at(s.option);
      out.clauses.push_back(Clause{unfolded.clauses.at(c).head, o.literals});
    }
  }
  for (const auto& cand : space.candidates) {
    std::size_t v = m.sc_vars.at(cand.id);
    if (!value_of(a.values, v)) continue;
    out.clauses.push_back(cand.clause);
    out.registry.declare(cand.clause.head.predicate, cand.clause.head.arity(),
                         Role::Support);
  }
  std::int64_t recount = 0;
  for (const auto& c : out.clauses) recount += static_cast<std::int64_t>(c.size());
  if (recount != objective_breakdown(m, a.values).size)
    throw InternalError("decoded size " + std::to_string(recount) +
                        " differs from the objective's size component");
  out.clauses.insert(out.clauses.end(), unfolded.passthrough.begin(),
                     unfolded.passthrough.end());
  return out;
}

std::string dump_model(const CopModel& m) {
  std::ostringstream os;
  os << "* #variable= " << m.num_vars() << " #constraint= " << m.constraints.size() << "\n";
  for (std::size_t v = 0; v < m.num_vars(); ++v)
    os << "* x" << v + 1 << " = " << m.var_name(v) << "\n";
  os << "min:";
  for (const auto& t : m.objective) os << " +" << t.weight << " x" << t.var + 1;
  os << " ;\n";
  for (const auto& c : m.constraints) {
    std::int64_t rhs = c.rhs;
    std::map<std::uint32_t, std::int64_t> coef;
    for (const auto& t : c.terms) {
      if (t.lit.negated) {
        coef[t.lit.var] -= t.coef;
        rhs -= t.coef;
      } else {
        coef[t.lit.var] += t.coef;
      }
    }
    for (const auto& [v, k] : coef) {
      if (k == 0) continue;
      os << (k > 0 ? " +" : " ") << k << " x" << v + 1;
    }
    os << " >= " << rhs << " ;\n";
  }
  return os.str();
}

}  // namespace kbr
