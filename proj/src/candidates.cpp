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


#include "kbr/candidates.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>

#include "kbr/clause_ops.hpp"
#include "kbr/matching.hpp"

namespace kbr {
namespace {

constexpr std::size_t kDefaultLevelCap = 16;

using Occurrence = std::pair<std::size_t, LiteralSubset>;  // class, positions

// A clause group is every current folding of one unfolded clause.
using Group = std::vector<const std::vector<Atom>*>;

struct Extraction {
  std::vector<CandidateSupportClause> cands;  // id == class index
  // occurrences[g][f] lists the class matches inside folding f of group g.
  std::vector<std::vector<std::vector<Occurrence>>> occurrences;
};

class ClassTable {
 public:
  /// Returns the class of `body`, and whether it was new.
  std::pair<std::size_t, bool> find_or_add(const std::vector<Atom>& body) {
    std::size_t h = variant_hash(body);
    auto& bucket = by_hash_[h];
    for (std::size_t k : bucket)
      if (variant_equal(bodies_[k], body)) return {k, false};
    bucket.push_back(bodies_.size());
    bodies_.push_back(body);
    return {bodies_.size() - 1, true};
  }

 private:
  std::vector<std::vector<Atom>> bodies_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash_;
};

Symbol invented_name(std::size_t level, std::size_t& ordinal,
                     const std::set<Symbol>& reserved) {
  for (;;) {
    Symbol s("inv_" + std::to_string(level) + "_" + std::to_string(++ordinal));
    if (!reserved.count(s)) return s;
  }
}

Clause make_candidate_clause(Symbol name, const std::vector<Atom>& body) {
  Atom head{name, {}};
  for (Symbol v : variables_of(body)) head.args.push_back(Term::variable(v));
  return with_canonical_variables(Clause{std::move(head), body});
}

Extraction extract(const std::vector<Group>& groups, std::size_t i, std::size_t j,
                   std::size_t level, const std::set<Symbol>& allowed,
                   const std::set<Symbol>& reserved,
                   const std::unordered_map<Symbol, std::size_t>& lower_ids,
                   bool mixed = false) {
  Extraction out;
  ClassTable table;
  std::size_t ordinal = 0;
  out.occurrences.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::map<std::size_t, std::size_t> best_in_group;
    for (const auto* body : groups[g]) {
      std::vector<std::size_t> usable;
      std::vector<Atom> sub;
      for (std::size_t k = 0; k < body->size(); ++k)
        if (mixed || allowed.empty() || allowed.count((*body)[k].predicate)) {
          usable.push_back(k);
          sub.push_back((*body)[k]);
        }
      auto& occ = out.occurrences[g].emplace_back();
      std::map<std::size_t, std::vector<LiteralSubset>> per_class;
      for (const auto& s : connected_power_set(sub, i, j)) {
        LiteralSubset positions;
        for (std::size_t k : s) positions.push_back(usable[k]);
        auto lits = select(*body, positions);
        if (mixed && !allowed.empty() &&
            std::none_of(lits.begin(), lits.end(),
                         [&](const Atom& a) { return allowed.count(a.predicate) != 0; }))
          continue;
        auto [cls, added] = table.find_or_add(lits);
        if (added) {
          CandidateSupportClause c;
          c.id = cls;
          c.level = level;
          c.body_size = lits.size();
          c.clause = make_candidate_clause(invented_name(level, ordinal, reserved), lits);
          std::set<std::size_t> deps;
          for (const auto& a : lits) {
            auto it = lower_ids.find(a.predicate);
            if (it != lower_ids.end()) deps.insert(it->second);
          }
          c.dependencies.assign(deps.begin(), deps.end());
          out.cands.push_back(std::move(c));
        }
        per_class[cls].push_back(positions);
        occ.emplace_back(cls, std::move(positions));
      }
      for (const auto& [cls, subsets] : per_class) {
        auto& best = best_in_group[cls];
        best = std::max(best, max_disjoint(subsets));
      }
    }
    for (const auto& [cls, n] : best_in_group) out.cands[cls].usage += n;
  }
  return out;
}

bool has_singleton(const Clause& c) {
  for (const auto& [v, n] : variable_occurrences(c))
    if (n == 1) return true;
  return false;
}

std::size_t disjoint_search(const std::vector<LiteralSubset>& subsets, std::size_t from,
                            std::vector<char>& used, std::size_t& budget) {
  std::size_t best = 0;
  for (std::size_t k = from; k < subsets.size() && budget > 0; ++k) {
    --budget;
    const auto& s = subsets[k];
    if (std::any_of(s.begin(), s.end(), [&](std::size_t x) { return used[x]; }))
      continue;
    for (std::size_t x : s) used[x] = 1;
    best = std::max(best, 1 + disjoint_search(subsets, k + 1, used, budget));
    for (std::size_t x : s) used[x] = 0;
  }
  return best;
}

// Instance of the candidate head matching the literals at `positions`.
Atom head_instance(const CandidateSupportClause& cand, const std::vector<Atom>& body,
                   const LiteralSubset& positions) {
  auto target = select(body, positions);
  Renaming r;
  std::optional<Atom> head;
  for_each_embedding(cand.clause.body, target, r,
                     [&](const std::vector<std::size_t>&, const Renaming& ren) {
                       Substitution s;
                       for (const auto& [from, to] : ren.pairs())
                         s.emplace(from, Term::variable(to));
                       head = substitute(cand.clause.head, s);
                       return false;
                     });
  return *head;
}

struct OptionHash {
  std::size_t operator()(const std::vector<Atom>& lits) const {
    std::size_t h = lits.size();
    for (const auto& a : lits) h = h * 1000003u ^ hash_value(a);
    return h;
  }
};

}  // namespace

std::vector<std::size_t> LevelledSearchSpace::candidates_at(std::size_t level) const {
  std::vector<std::size_t> out;
  for (const auto& c : candidates)
    if (c.level == level) out.push_back(c.id);
  return out;
}

std::size_t LevelledSearchSpace::option_count() const {
  std::size_t n = 0;
  for (const auto& per_clause : foldings)
    for (const auto& per_level : per_clause) n += per_level.size();
  return n;
}

std::size_t max_disjoint(const std::vector<LiteralSubset>& subsets) {
  std::size_t width = 0;
  for (const auto& s : subsets)
    for (std::size_t x : s) width = std::max(width, x + 1);
  std::vector<char> used(width, 0);
  std::size_t budget = 200000;
  return disjoint_search(subsets, 0, used, budget);
}

bool is_unprofitable(std::size_t usage, std::size_t size) {
  return usage * (size - 1) <= usage + size;
}

std::vector<CandidateSupportClause> extract_candidates(
    const std::vector<Clause>& p, std::size_t i, std::size_t j, std::size_t level,
    const std::set<Symbol>& allowed, const std::set<Symbol>& reserved) {
  std::vector<Group> groups;
  for (const auto& c : p) groups.push_back({&c.body});
  std::set<Symbol> taken = reserved;
  for (const auto& c : p) {
    taken.insert(c.head.predicate);
    for (const auto& a : c.body) taken.insert(a.predicate);
  }
  return extract(groups, i, j, level, allowed, taken, {}).cands;
}

std::vector<CandidateSupportClause> prune_singletons(
    std::vector<CandidateSupportClause> cands) {
  std::erase_if(cands, [](const auto& c) { return has_singleton(c.clause); });
  return cands;
}

std::vector<CandidateSupportClause> prune_unprofitable(
    std::vector<CandidateSupportClause> cands) {
  std::erase_if(cands, [](const auto& c) { return is_unprofitable(c.usage, c.size()); });
  return cands;
}

LevelledSearchSpace build_search_space(const UnfoldedProgram& u,
                                       const SearchSpaceOptions& opts) {
  LevelledSearchSpace space;
  const std::size_t n = u.clauses.size();
  space.foldings.resize(n);
  for (std::size_t c = 0; c < n; ++c)
    space.foldings[c].push_back({FoldingOption{c, 0, u.clauses[c].body, {}}});

  std::set<Symbol> reserved;
  for (const auto& [name, entry] : u.registry.entries()) reserved.insert(name);
  for (const auto& c : u.clauses) {
    reserved.insert(c.head.predicate);
    for (const auto& a : c.body) reserved.insert(a.predicate);
  }

  const std::size_t level_cap = opts.max_levels.value_or(kDefaultLevelCap);
  std::unordered_map<Symbol, std::size_t> lower_ids;
  std::unordered_map<Symbol, std::size_t> all_ids;
  std::set<Symbol> allowed;
  space.stop_reason = "max_levels reached";

  for (std::size_t level = 1;; ++level) {
    if (level > level_cap) {
      if (!opts.max_levels)
        space.stop_reason = "level safety cap of " + std::to_string(kDefaultLevelCap) +
                            " reached";
      break;
    }
    std::vector<std::size_t> active;
    std::vector<Group> groups;
    bool all_unit = true;
    for (std::size_t c = 0; c < n; ++c) {
      if (space.foldings[c].size() != level) continue;
      active.push_back(c);
      Group g;
      for (const auto& o : space.foldings[c].back()) {
        g.push_back(&o.literals);
        if (o.literals.size() > 1) all_unit = false;
      }
      groups.push_back(std::move(g));
    }
    if (active.empty() || all_unit) {
      space.stop_reason = "every folded clause has a single body literal";
      break;
    }

    LevelStats st;
    st.level = level;
    Extraction ex = extract(groups, opts.min_body, opts.max_body, level, allowed,
                            reserved, opts.mixed_levels ? all_ids : lower_ids,
                            opts.mixed_levels);
    st.extracted = ex.cands.size();
    std::vector<char> keep(ex.cands.size(), 1);
    if (opts.prune) {
      for (const auto& c : ex.cands)
        if (has_singleton(c.clause)) keep[c.id] = 0;
      st.after_singletons = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), 1));
      for (const auto& c : ex.cands)
        if (keep[c.id] && is_unprofitable(c.usage, c.size())) keep[c.id] = 0;
      st.after_unprofitable = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), 1));
    } else {
      st.after_singletons = st.after_unprofitable = ex.cands.size();
    }
    if (st.after_unprofitable == 0) {
      space.stats.push_back(std::move(st));
      space.stop_reason = "no candidate survived pruning at level " + std::to_string(level);
      break;
    }

    // Survivors get global ids and consecutive names.
    std::vector<std::size_t> global(ex.cands.size(), SIZE_MAX);
    std::size_t ordinal = 0;
    lower_ids.clear();
    allowed.clear();
    for (auto& c : ex.cands) {
      if (!keep[c.id]) continue;
      global[c.id] = space.candidates.size();
      c.id = space.candidates.size();
      c.clause.head.predicate = invented_name(level, ordinal, reserved);
      lower_ids.emplace(c.clause.head.predicate, c.id);
      all_ids.emplace(c.clause.head.predicate, c.id);
      allowed.insert(c.clause.head.predicate);
      space.candidates.push_back(std::move(c));
    }
    for (const auto& c : space.candidates) reserved.insert(c.clause.head.predicate);

    const std::size_t hard_cap = opts.max_options_per_clause * 8;
    bool any_options = false;
    for (std::size_t g = 0; g < active.size(); ++g) {
      const std::size_t c = active[g];
      const auto& bases = space.foldings[c].back();
      std::vector<FoldingOption> options;
      std::unordered_map<std::vector<Atom>, char, OptionHash> seen;
      bool capped = false;
      for (std::size_t b = 0; b < bases.size() && !capped; ++b) {
        const auto& body = bases[b].literals;
        struct Match {
          LiteralSubset positions;
          Atom head;
        };
        std::vector<Match> matches;
        for (const auto& [cls, positions] : ex.occurrences[g][b])
          if (keep[cls])
            matches.push_back({positions, head_instance(space.candidates[global[cls]],
                                                        body, positions)});
        std::vector<char> used(body.size(), 0);
        std::vector<std::size_t> chosen;
        auto emit = [&]() {
          std::vector<int> owner(body.size(), -1);
          for (std::size_t k : chosen)
            for (std::size_t x : matches[k].positions) owner[x] = static_cast<int>(k);
          std::vector<Atom> lits;
          for (std::size_t x = 0; x < body.size(); ++x) {
            if (owner[x] < 0)
              lits.push_back(body[x]);
            else if (matches[owner[x]].positions.front() == x)
              lits.push_back(matches[owner[x]].head);
          }
          if (!seen.emplace(lits, 1).second) return;
          FoldingOption o{c, level, std::move(lits), {}};
          std::set<std::size_t> req;
          for (const auto& a : o.literals) {
            auto it = all_ids.find(a.predicate);
            if (it != all_ids.end()) req.insert(it->second);
          }
          o.required.assign(req.begin(), req.end());
          options.push_back(std::move(o));
        };
        std::function<void(std::size_t)> dfs = [&](std::size_t from) {
          for (std::size_t k = from; k < matches.size(); ++k) {
            if (options.size() >= hard_cap) {
              capped = true;
              return;
            }
            const auto& pos = matches[k].positions;
            if (std::any_of(pos.begin(), pos.end(), [&](std::size_t x) { return used[x]; }))
              continue;
            for (std::size_t x : pos) used[x] = 1;
            chosen.push_back(k);
            emit();
            dfs(k + 1);
            chosen.pop_back();
            for (std::size_t x : pos) used[x] = 0;
          }
        };
        dfs(0);
      }
      if (options.empty()) continue;
      std::stable_sort(options.begin(), options.end(),
                       [](const auto& a, const auto& b) { return a.size() < b.size(); });
      if (capped || options.size() > opts.max_options_per_clause) {
        ++st.truncated_clauses;
        st.warnings.push_back("clause " + std::to_string(c) + ": folding options at level " +
                              std::to_string(level) + " truncated to " +
                              std::to_string(opts.max_options_per_clause));
        if (options.size() > opts.max_options_per_clause)
          options.resize(opts.max_options_per_clause);
      }
      st.folding_options += options.size();
      space.foldings[c].push_back(std::move(options));
      any_options = true;
    }
    space.stats.push_back(std::move(st));
    if (!any_options) {
      space.stop_reason = "no folding used a level-" + std::to_string(level) + " candidate";
      break;
    }
    space.max_level = level;
  }
  return space;
}

Clause expand_option(const FoldingOption& option, const Atom& head,
                     const LevelledSearchSpace& space) {
  std::unordered_map<Symbol, const CandidateSupportClause*> by_name;
  for (const auto& c : space.candidates) by_name.emplace(c.clause.head.predicate, &c);
  Clause out{head, {}};
  std::size_t fresh = 0;
  std::function<void(const Atom&)> expand = [&](const Atom& a) {
    auto it = by_name.find(a.predicate);
    if (it == by_name.end()) {
      out.body.push_back(a);
      return;
    }
    const Clause& def = it->second->clause;
    Substitution s;
    for (std::size_t k = 0; k < def.head.args.size(); ++k)
      s.emplace(def.head.args[k].name(), a.args[k]);
    for (Symbol v : variables_of(def.body))
      if (!s.count(v)) s.emplace(v, Term::variable("$e" + std::to_string(fresh++)));
    for (const auto& b : def.body) expand(substitute(b, s));
  };
  for (const auto& a : option.literals) expand(a);
  return out;
}

}  // namespace kbr
