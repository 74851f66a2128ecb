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


#include "kbr/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "json.hpp"

#include "kbr/error.hpp"

namespace kbr {
namespace {

using Clock = std::chrono::steady_clock;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Incumbent shared by all workers.
struct Incumbent {
  std::atomic<std::int64_t> best{kInf};
  std::mutex mu;
  std::vector<char> values;
  std::vector<TracePoint> trace;
  Clock::time_point start;

  bool offer(const std::vector<char>& v, std::int64_t cost) {
    std::lock_guard lock(mu);
    if (cost >= best.load()) return false;
    best.store(cost);
    values = v;
    trace.push_back({ms_since(start), cost});
    return true;
  }
};

// Per-model data derived once and read by every worker.
struct Structure {
  std::vector<std::size_t> sc_vars;
  std::vector<std::vector<std::size_t>> closure;     // per SC var, itself + deps
  std::vector<std::vector<std::size_t>> dependents;  // per SC var, reverse deps
  std::vector<std::vector<std::vector<std::size_t>>> y_closure;  // [clause][select]
  std::vector<double> share;                         // per var
  std::vector<double> saving;                        // per var
  std::optional<std::size_t> cap;

  explicit Structure(const CopModel& m) {
    const std::size_t n = m.num_vars();
    sc_vars = m.sc_order;
    closure.resize(n);
    dependents.resize(n);
    for (std::size_t s : sc_vars) {
      std::vector<char> seen(n, 0);
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = 1;
        closure[s].push_back(v);
        for (std::size_t d : m.sc_dependencies[v]) stack.push_back(d);
      }
      for (std::size_t d : m.sc_dependencies[s]) dependents[d].push_back(s);
    }
    std::vector<std::size_t> uses(n, 0);
    share.assign(n, 0);
    saving.assign(n, 0);
    y_closure.resize(m.num_clauses());
    for (std::size_t c = 0; c < m.num_clauses(); ++c) {
      std::vector<char> in_group(n, 0);
      std::int64_t raw = kInf;
      for (const auto& y : m.selects[c])
        if (y.fold_var == kNoVar) raw = std::min(raw, y.weight);
      std::vector<double> gain(n, 0);
      for (const auto& y : m.selects[c]) {
        std::vector<std::size_t> cl;
        if (y.fold_var != kNoVar) {
          std::vector<char> seen(n, 0);
          for (std::size_t s : m.fold_required[y.fold_var])
            for (std::size_t d : closure[s])
              if (!seen[d]) {
                seen[d] = 1;
                cl.push_back(d);
              }
        }
        for (std::size_t s : cl) {
          in_group[s] = 1;
          if (raw != kInf) gain[s] = std::max(gain[s], static_cast<double>(raw - y.weight));
        }
        y_closure[c].push_back(std::move(cl));
      }
      for (std::size_t s : sc_vars) {
        uses[s] += in_group[s];
        saving[s] += gain[s];
      }
    }
    for (std::size_t s : sc_vars) {
      if (uses[s]) share[s] = static_cast<double>(m.weights[s]) / static_cast<double>(uses[s]);
      saving[s] -= static_cast<double>(m.weights[s]);
    }
    for (const auto& f : m.families)
      if (f.family == Family::PredicateCap) cap = std::min(cap.value_or(f.bound), f.bound);
  }
};

// Cost of the best completion of a fixed SC set; kInf when none exists.
std::int64_t complete(const CopModel& m, const std::vector<char>& in_set,
                      std::vector<char>* values) {
  std::int64_t cost = 0;
  std::size_t count = 0;
  for (std::size_t s : m.sc_order) {
    if (!in_set[s]) continue;
    ++count;
    cost += m.weights[s];
    for (std::size_t d : m.sc_dependencies[s])
      if (!in_set[d]) return kInf;
  }
  for (const auto& f : m.families)
    if (f.family == Family::PredicateCap && count > f.bound) return kInf;
  if (values) {
    values->assign(m.num_vars(), 0);
    for (std::size_t s : m.sc_order) (*values)[s] = in_set[s];
  }
  auto fold_on = [&](std::size_t f) {
    for (std::size_t s : m.fold_required[f])
      if (!in_set[s]) return false;
    return true;
  };
  for (std::size_t c = 0; c < m.num_clauses(); ++c) {
    const SelectVar* best = nullptr;
    for (const auto& y : m.selects[c]) {
      if (y.fold_var != kNoVar && !fold_on(y.fold_var)) continue;
      if (!best || y.weight < best->weight) best = &y;
    }
    if (!best) return kInf;
    cost += best->weight;
    if (values) {
      (*values)[best->var] = 1;
      (*values)[best->level_var] = 1;
      for (const auto& y : m.selects[c])
        if (y.fold_var != kNoVar) (*values)[y.fold_var] = fold_on(y.fold_var);
    }
  }
  for (const auto& g : m.red_groups) {
    std::size_t on = 0;
    for (std::size_t f : g.fold_vars) on += fold_on(f);
    if (on > 1) {
      cost += m.weights[g.var];
      if (values) (*values)[g.var] = 1;
    }
  }
  return cost;
}

// Greedy add/remove descent over SC sets.
std::vector<char> warm_start(const CopModel& m, const Structure& st, Incumbent& inc,
                             Clock::time_point deadline) {
  std::vector<char> set(m.num_vars(), 0);
  std::int64_t cost = complete(m, set, nullptr);
  if (cost == kInf) {
    for (std::size_t s : st.sc_vars) set[s] = 1;
    cost = complete(m, set, nullptr);
  }
  if (cost == kInf) return std::vector<char>(m.num_vars(), 0);
  std::vector<char> values;
  complete(m, set, &values);
  inc.offer(values, cost);

  std::vector<char> trial;
  for (;;) {
    std::int64_t best_cost = cost;
    std::vector<char> best_set;
    for (std::size_t s : st.sc_vars) {
      if (Clock::now() > deadline) return set;
      trial = set;
      if (!set[s]) {
        for (std::size_t d : st.closure[s]) trial[d] = 1;
      } else {
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
          std::size_t v = stack.back();
          stack.pop_back();
          if (!trial[v]) continue;
          trial[v] = 0;
          for (std::size_t u : st.dependents[v]) stack.push_back(u);
        }
      }
      std::int64_t c = complete(m, trial, nullptr);
      if (c < best_cost) {
        best_cost = c;
        best_set = trial;
      }
    }
    if (best_set.empty()) return set;
    set = std::move(best_set);
    cost = best_cost;
    complete(m, set, &values);
    inc.offer(values, cost);
  }
}

class Search {
 public:
  Search(const CopModel& m, const Structure& st, Incumbent& inc, std::uint64_t seed,
         std::vector<char> phase)
      : m_(m), st_(st), inc_(inc), phase_(std::move(phase)) {
    const std::size_t n = m.num_vars();
    occurs_.resize(2 * n);
    slack_.resize(m.constraints.size());
    max_coef_.resize(m.constraints.size());
    for (std::size_t c = 0; c < m.constraints.size(); ++c) {
      std::int64_t total = 0;
      for (const auto& t : m.constraints[c].terms) {
        occurs_[2 * t.lit.var + (t.lit.negated ? 1 : 0)].push_back(
            {static_cast<std::uint32_t>(c), t.coef});
        total += t.coef;
        max_coef_[c] = std::max(max_coef_[c], t.coef);
      }
      slack_[c] = total - m.constraints[c].rhs;
    }
    value_.assign(n, -1);

    std::vector<std::size_t> scs = st.sc_vars;
    std::mt19937_64 rng(seed);
    std::vector<double> jitter(n, 0);
    if (seed != 0)
      for (std::size_t s : scs) jitter[s] = std::uniform_real_distribution<double>(0, 1)(rng);
    std::stable_sort(scs.begin(), scs.end(), [&](std::size_t a, std::size_t b) {
      return st.saving[a] + jitter[a] > st.saving[b] + jitter[b];
    });
    std::vector<std::size_t> ys;
    for (const auto& group : m.selects)
      for (const auto& y : group) ys.push_back(y.var);
    std::stable_sort(ys.begin(), ys.end(),
                     [&](std::size_t a, std::size_t b) { return m.weights[a] < m.weights[b]; });
    std::vector<char> placed(n, 0);
    for (std::size_t v : scs) order_.push_back(v), placed[v] = 1;
    for (std::size_t v : ys) order_.push_back(v), placed[v] = 1;
    for (std::size_t v = 0; v < n; ++v)
      if (!placed[v]) order_.push_back(v);
    first_.assign(n, 0);
    for (std::size_t v : ys) first_[v] = 1;
    for (std::size_t s : scs) first_[s] = phase_.empty() ? 1 : phase_[s];
  }

  /// Returns true when the tree was exhausted.
  bool run(Clock::time_point deadline, std::optional<std::uint64_t> max_decisions,
           std::atomic<bool>& stop) {
    bool ok = initial();
    std::uint64_t ticks = 0;
    for (;;) {
      if ((++ticks & 63) == 0 && (Clock::now() > deadline || stop.load())) return false;
      if (max_decisions && decisions_ >= *max_decisions) return false;
      if (ok && pruned()) ok = false;
      if (ok) {
        std::size_t v = pick();
        if (v == kNoVar) {
          std::vector<char> vals(value_.begin(), value_.end());
          inc_.offer(vals, cost_);
          ok = false;
        } else {
          ++decisions_;
          stack_.push_back({v, first_[v], false, trail_.size()});
          ok = assign(v, first_[v]) && propagate();
          continue;
        }
      }
      while (!stack_.empty() && stack_.back().flipped) {
        undo(stack_.back().trail_pos);
        stack_.pop_back();
      }
      if (stack_.empty()) return true;
      auto& d = stack_.back();
      undo(d.trail_pos);
      d.flipped = true;
      ok = assign(d.var, !d.first) && propagate();
    }
  }

  std::uint64_t decisions() const { return decisions_; }

 private:
  struct Decision {
    std::size_t var;
    char first;
    bool flipped;
    std::size_t trail_pos;
  };

  bool initial() {
    bool ok = true;
    for (std::size_t c = 0; c < slack_.size(); ++c) {
      if (slack_[c] < 0) ok = false;
      if (max_coef_[c] > slack_[c]) queue_.push_back(c);
    }
    return ok && propagate();
  }

  bool assign(std::size_t v, char val) {
    value_[v] = val;
    trail_.push_back(v);
    if (val) cost_ += m_.weights[v];
    bool ok = true;
    for (const auto& [c, coef] : occurs_[2 * v + (val ? 1 : 0)]) {
      slack_[c] -= coef;
      if (slack_[c] < 0) ok = false;
      else if (max_coef_[c] > slack_[c]) queue_.push_back(c);
    }
    return ok;
  }

  bool propagate() {
    while (!queue_.empty()) {
      std::size_t c = queue_.back();
      queue_.pop_back();
      if (slack_[c] < 0) {
        queue_.clear();
        return false;
      }
      for (const auto& t : m_.constraints[c].terms) {
        if (value_[t.lit.var] >= 0 || t.coef <= slack_[c]) continue;
        if (!assign(t.lit.var, t.lit.negated ? 0 : 1)) {
          queue_.clear();
          return false;
        }
      }
    }
    return true;
  }

  void undo(std::size_t pos) {
    queue_.clear();
    while (trail_.size() > pos) {
      std::size_t v = trail_.back();
      trail_.pop_back();
      char val = value_[v];
      if (val) cost_ -= m_.weights[v];
      for (const auto& [c, coef] : occurs_[2 * v + (val ? 1 : 0)]) slack_[c] += coef;
      value_[v] = -1;
    }
  }

  bool pruned() const {
    std::int64_t best = inc_.best.load();
    if (best == kInf) return false;
    double lb = static_cast<double>(cost_);
    for (std::size_t c = 0; c < m_.num_clauses(); ++c) {
      double group = std::numeric_limits<double>::infinity();
      const auto& ys = m_.selects[c];
      for (std::size_t k = 0; k < ys.size(); ++k) {
        char val = value_[ys[k].var];
        if (val == 1) {
          group = 0;
          break;
        }
        if (val == 0) continue;
        double g = static_cast<double>(ys[k].weight);
        for (std::size_t s : st_.y_closure[c][k])
          if (value_[s] < 0) g += st_.share[s];
        group = std::min(group, g);
      }
      lb += group;
      if (lb >= static_cast<double>(best) - 1e-6) return true;
    }
    return std::ceil(lb - 1e-6) >= static_cast<double>(best);
  }

  std::size_t pick() const {
    for (std::size_t v : order_)
      if (value_[v] < 0) return v;
    return kNoVar;
  }

  const CopModel& m_;
  const Structure& st_;
  Incumbent& inc_;
  std::vector<char> phase_;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> occurs_;
  std::vector<std::int64_t> slack_;
  std::vector<std::int64_t> max_coef_;
  std::vector<signed char> value_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> queue_;
  std::vector<Decision> stack_;
  std::vector<std::size_t> order_;
  std::vector<char> first_;
  std::int64_t cost_ = 0;
  std::uint64_t decisions_ = 0;
};

}  // namespace

std::size_t core_var_count(const CopModel& m) {
  std::size_t n = 0;
  for (const auto& v : m.vars)
    n += v.kind == VarKind::SC || v.kind == VarKind::FOLD || v.kind == VarKind::LEVEL;
  return n;
}

SolveResult solve(const CopModel& m, const SolverBudget& b) {
  if (!m.finalized) throw InternalError("solve() needs a finalized model");
  if (b.workers == 0) throw InternalError("solver needs at least one worker");
  Incumbent inc;
  inc.start = Clock::now();
  const auto deadline = inc.start + b.wall_time;
  Structure st(m);

  auto warm_deadline = inc.start + b.wall_time / 10;
  std::vector<char> phase = warm_start(m, st, inc, warm_deadline);

  std::atomic<bool> stop{false};
  std::atomic<bool> proved{false};
  std::atomic<std::uint64_t> decisions{0};
  auto work = [&](std::size_t w) {
    Search s(m, st, inc, w == 0 ? b.seed : b.seed + 0x9e3779b97f4a7c15ULL * w, phase);
    if (s.run(deadline, b.max_decisions, stop)) {
      proved.store(true);
      stop.store(true);
    }
    decisions += s.decisions();
  };
  if (b.workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < b.workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  SolveResult r;
  r.trace.incumbents = inc.trace;
  r.trace.decisions = decisions.load();
  r.trace.elapsed_ms = ms_since(inc.start);
  if (inc.best.load() == kInf) {
    std::vector<char> none(m.num_vars(), 0);
    std::vector<char> values;
    r.assignment.status = SolveStatus::Infeasible;
    if (!proved && complete(m, none, &values) != kInf) {
      r.assignment.values = values;
      r.assignment.objective_value = m.objective_value(values);
      r.assignment.status = SolveStatus::Feasible;
    }
  } else {
    r.assignment.values = inc.values;
    r.assignment.objective_value = inc.best.load();
    r.assignment.status = proved ? SolveStatus::Optimal : SolveStatus::TimeoutBest;
  }
  r.trace.status = r.assignment.status;
  return r;
}

Assignment brute_force_solve(const CopModel& m) {
  if (!m.finalized) throw InternalError("brute_force_solve() needs a finalized model");
  std::vector<std::size_t> core;
  std::vector<int> bit(m.num_vars(), -1);
  for (std::size_t v = 0; v < m.num_vars(); ++v) {
    auto k = m.vars[v].kind;
    if (k == VarKind::SC || k == VarKind::FOLD || k == VarKind::LEVEL) {
      bit[v] = static_cast<int>(core.size());
      core.push_back(v);
    }
  }
  if (core.size() > kBruteForceLimit)
    throw LimitError("brute force needs at most " + std::to_string(kBruteForceLimit) +
                     " core variables, model has " + std::to_string(core.size()));
  auto mask_of = [&](const std::vector<std::size_t>& vs) {
    std::uint32_t mask = 0;
    for (std::size_t v : vs) mask |= 1u << bit[v];
    return mask;
  };
  struct Implication {
    std::uint32_t subject, mask;
  };
  std::vector<Implication> iff, deps;
  std::vector<std::uint32_t> exactly_one;
  std::vector<std::pair<std::uint32_t, std::size_t>> caps;
  for (const auto& f : m.families) {
    switch (f.family) {
      case Family::FoldIffSupports: iff.push_back({1u << bit[f.subject], mask_of(f.vars)}); break;
      case Family::CandidateDependency:
        deps.push_back({1u << bit[f.subject], mask_of(f.vars)});
        break;
      case Family::ExactlyOneLevel: exactly_one.push_back(mask_of(f.vars)); break;
      case Family::PredicateCap: caps.push_back({mask_of(f.vars), f.bound}); break;
      default: break;
    }
  }
  std::vector<std::int64_t> bit_weight(core.size());
  for (std::size_t k = 0; k < core.size(); ++k) bit_weight[k] = m.weights[core[k]];
  struct Option {
    std::int64_t weight;
    std::uint32_t need;
  };
  std::vector<std::vector<Option>> groups(m.num_clauses());
  for (std::size_t c = 0; c < m.num_clauses(); ++c)
    for (const auto& y : m.selects[c]) {
      std::uint32_t need = 1u << bit[y.level_var];
      if (y.fold_var != kNoVar) need |= 1u << bit[y.fold_var];
      groups[c].push_back({y.weight, need});
    }
  std::vector<std::pair<std::uint32_t, std::int64_t>> reds;
  for (const auto& g : m.red_groups) reds.push_back({mask_of(g.fold_vars), m.weights[g.var]});

  std::int64_t best = kInf;
  std::uint32_t best_mask = 0;
  const std::uint64_t total = 1ULL << core.size();
  for (std::uint64_t x64 = 0; x64 < total; ++x64) {
    const auto x = static_cast<std::uint32_t>(x64);
    bool ok = true;
    for (const auto& e : exactly_one)
      if (std::popcount(x & e) != 1) { ok = false; break; }
    if (!ok) continue;
    for (const auto& i : iff)
      if (((x & i.subject) != 0) != ((x & i.mask) == i.mask)) { ok = false; break; }
    if (!ok) continue;
    for (const auto& d : deps)
      if ((x & d.subject) && (x & d.mask) != d.mask) { ok = false; break; }
    if (!ok) continue;
    for (const auto& [mask, bound] : caps)
      if (static_cast<std::size_t>(std::popcount(x & mask)) > bound) { ok = false; break; }
    if (!ok) continue;
    std::int64_t cost = 0;
    for (std::uint32_t y = x; y; y &= y - 1) cost += bit_weight[std::countr_zero(y)];
    for (const auto& g : groups) {
      std::int64_t cheapest = kInf;
      for (const auto& o : g)
        if ((x & o.need) == o.need) cheapest = std::min(cheapest, o.weight);
      if (cheapest == kInf) { ok = false; break; }
      cost += cheapest;
    }
    if (!ok) continue;
    for (const auto& [mask, w] : reds)
      if (std::popcount(x & mask) > 1) cost += w;
    if (cost < best) {
      best = cost;
      best_mask = x;
    }
  }

  Assignment a;
  if (best == kInf) return a;
  a.values.assign(m.num_vars(), 0);
  for (std::size_t k = 0; k < core.size(); ++k) a.values[core[k]] = (best_mask >> k) & 1u;
  for (std::size_t c = 0; c < m.num_clauses(); ++c) {
    const SelectVar* pick = nullptr;
    for (const auto& y : m.selects[c]) {
      bool on = a.values[y.level_var] && (y.fold_var == kNoVar || a.values[y.fold_var]);
      if (on && (!pick || y.weight < pick->weight)) pick = &y;
    }
    a.values[pick->var] = 1;
  }
  for (const auto& g : m.red_groups) {
    std::size_t on = 0;
    for (std::size_t f : g.fold_vars) on += a.values[f];
    a.values[g.var] = on > 1;
  }
  a.objective_value = m.objective_value(a.values);
  a.status = SolveStatus::Optimal;
  if (a.objective_value != best || !satisfies_families(m, a.values))
    throw InternalError("brute force completion disagrees with the model");
  return a;
}

std::string trace_records(const SolveTrace& t) {
  std::string out;
  for (const auto& p : t.incumbents) {
    nlohmann::json j{{"elapsed_ms", p.elapsed_ms}, {"objective", p.objective}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace kbr
