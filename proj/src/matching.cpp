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


#include "kbr/matching.hpp"

#include <algorithm>

namespace kbr {

std::optional<Symbol> Renaming::lookup(Symbol from) const {
  for (const auto& [f, t] : pairs_)
    if (f == from) return t;
  return std::nullopt;
}

bool Renaming::is_image(Symbol to) const {
  return std::any_of(pairs_.begin(), pairs_.end(),
                     [to](const auto& p) { return p.second == to; });
}

bool Renaming::bind(Symbol from, Symbol to) {
  for (const auto& [f, t] : pairs_) {
    if (f == from) return t == to;
    if (t == to) return false;
  }
  pairs_.emplace_back(from, to);
  return true;
}

bool match_renaming(const Term& pattern, const Term& target, Renaming& r) {
  if (pattern.kind() != target.kind()) return false;
  if (pattern.is_variable()) return r.bind(pattern.name(), target.name());
  if (pattern.name() != target.name()) return false;
  const auto& pa = pattern.args();
  const auto& ta = target.args();
  if (pa.size() != ta.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!match_renaming(pa[i], ta[i], r)) return false;
  return true;
}

bool match_renaming(const Atom& pattern, const Atom& target, Renaming& r) {
  if (pattern.predicate != target.predicate ||
      pattern.args.size() != target.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_renaming(pattern.args[i], target.args[i], r)) return false;
  return true;
}

namespace {

struct EmbeddingSearch {
  std::span<const Atom> pattern;
  std::span<const Atom> target;
  const EmbeddingVisitor& visit;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> candidates;
  std::vector<bool> used;
  std::vector<std::size_t> assignment;

  bool run(std::size_t depth, Renaming& r) {
    if (depth == order.size()) return visit(assignment, r);
    std::size_t p = order[depth];
    for (std::size_t t : candidates[p]) {
      if (used[t]) continue;
      std::size_t m = r.mark();
      if (match_renaming(pattern[p], target[t], r)) {
        used[t] = true;
        assignment[p] = t;
        bool go_on = run(depth + 1, r);
        used[t] = false;
        if (!go_on) {
          r.undo(m);
          return false;
        }
      }
      r.undo(m);
    }
    return true;
  }
};

}  // namespace

bool for_each_embedding(std::span<const Atom> pattern,
                        std::span<const Atom> target, Renaming& r,
                        const EmbeddingVisitor& visit,
                        const std::vector<bool>& usable) {
  if (pattern.size() > target.size()) return true;
  EmbeddingSearch s{pattern, target, visit, {}, {}, {}, {}};
  s.candidates.resize(pattern.size());
  for (std::size_t p = 0; p < pattern.size(); ++p) {
    for (std::size_t t = 0; t < target.size(); ++t) {
      if (!usable.empty() && !usable[t]) continue;
      if (target[t].predicate == pattern[p].predicate &&
          target[t].args.size() == pattern[p].args.size())
        s.candidates[p].push_back(t);
    }
    if (s.candidates[p].empty()) return true;
  }

  // Most constrained first, then grow along shared variables so that later
  // literals are pinned by bindings made earlier.
  std::vector<std::vector<Symbol>> vars(pattern.size());
  for (std::size_t p = 0; p < pattern.size(); ++p) vars[p] = variables_of(pattern[p]);
  std::vector<bool> placed(pattern.size(), false);
  std::vector<Symbol> bound;
  for (std::size_t step = 0; step < pattern.size(); ++step) {
    std::size_t best = pattern.size();
    std::size_t best_shared = 0;
    for (std::size_t p = 0; p < pattern.size(); ++p) {
      if (placed[p]) continue;
      std::size_t shared = 0;
      for (Symbol v : vars[p])
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) ++shared;
      if (best == pattern.size() || shared > best_shared ||
          (shared == best_shared &&
           s.candidates[p].size() < s.candidates[best].size())) {
        best = p;
        best_shared = shared;
      }
    }
    placed[best] = true;
    s.order.push_back(best);
    for (Symbol v : vars[best])
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
  }

  s.used.assign(target.size(), false);
  s.assignment.assign(pattern.size(), 0);
  return s.run(0, r);
}

}  // namespace kbr
