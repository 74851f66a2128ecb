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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "kbr/bench.hpp"
#include "kbr/error.hpp"
#include "kbr/pipeline.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

namespace kbr {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// 1. Refactoring preserves syntactic equivalence on random programs.
Outcome equivalence_preservation() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t ok = 0, gained = 0, n = 1000;
  for (std::size_t k = 0; k < n; ++k) {
    Program p = oracle::random_program(rng);
    RefactorConfig cfg;
    cfg.budget.wall_time = std::chrono::milliseconds(150);
    cfg.budget.seed = k;
    try {
      RefactorResult r = refactor(p, cfg);
      if (syntactic_equiv(p, r.program)) ++ok;
      gained += !r.report.no_gain;
    } catch (const Error&) {
    }
  }
  double secs = seconds_since(t0);
  return {ok == n && secs < 600,
          fmt::format("{}/{} equivalent, {} with a size gain", ok, n, gained)};
}

/// Redundant corpus: k clauses, each holding the chain a-b-c once, wrapped
/// in 0 to 2 noise literals whose predicates are unique to the clause.
std::vector<Program> redundant_corpus() {
  std::vector<Program> out;
  std::mt19937_64 rng(2002);
  for (std::size_t k = 3; k <= 10; ++k)
    for (int variant = 0; variant < 4; ++variant) {
      std::string text;
      for (std::size_t c = 0; c < k; ++c) text += fmt::format("#task t{}/2.\n", c);
      for (std::size_t c = 0; c < k; ++c) {
        std::size_t before = std::uniform_int_distribution<std::size_t>(0, variant % 2)(rng);
        std::size_t after = std::uniform_int_distribution<std::size_t>(0, variant / 2)(rng);
        std::vector<std::string> lits;
        std::string cur = "X";
        for (std::size_t j = 0; j < before; ++j) {
          lits.push_back(fmt::format("pre{}_{}({},P{})", c, j, cur, j));
          cur = fmt::format("P{}", j);
        }
        lits.push_back(fmt::format("a({},B)", cur));
        lits.push_back("b(B,C)");
        cur = after ? "D" : "Y";
        lits.push_back(fmt::format("c(C,{})", cur));
        for (std::size_t j = 0; j < after; ++j) {
          std::string next = j + 1 == after ? "Y" : fmt::format("Q{}", j);
          lits.push_back(fmt::format("post{}_{}({},{})", c, j, cur, next));
          cur = next;
        }
        std::string body;
        for (const auto& l : lits) body += (body.empty() ? "" : ", ") + l;
        text += fmt::format("t{}(X,Y) :- {}.\n", c, body);
      }
      out.push_back(parse_program(text));
    }
  return out;
}

struct CorpusRow {
  std::size_t original = 0;
  std::size_t refactored = 0;
  std::int64_t objective = 0;
  bool equivalent = false;
  bool oracle_checked = false;
  std::int64_t oracle_objective = 0;
  std::size_t oracle_size = 0;
};

const std::vector<CorpusRow>& corpus_rows() {
  static std::vector<CorpusRow> rows = [] {
    std::vector<CorpusRow> out;
    for (const Program& p : redundant_corpus()) {
      RefactorConfig cfg;
      cfg.budget.wall_time = std::chrono::milliseconds(5000);
      RefactorResult r = refactor(p, cfg);
      CorpusRow row;
      row.original = p.size();
      row.refactored = r.program.size();
      row.objective = r.report.objective;
      row.equivalent = syntactic_equiv(p, r.program);
      UnfoldedProgram u = unfold(p);
      LevelledSearchSpace s = build_search_space(u);
      CopModel m = encode(s, u);
      if (core_var_count(m) <= kBruteForceLimit) {
        Assignment a = brute_force_solve(m);
        row.oracle_checked = true;
        row.oracle_objective = a.objective_value;
        row.oracle_size = static_cast<std::size_t>(objective_breakdown(m, a.values).size);
      }
      out.push_back(row);
    }
    return out;
  }();
  return rows;
}

// 2. Strict size reduction on the redundant corpus, optimal where checkable.
Outcome size_reduction() {
  const auto& rows = corpus_rows();
  std::size_t smaller = 0, checked = 0, matched = 0;
  for (const auto& r : rows) {
    smaller += r.refactored < r.original && r.equivalent;
    if (r.oracle_checked) {
      ++checked;
      matched += r.objective == r.oracle_objective;
    }
  }
  return {smaller == rows.size() && matched == checked && checked > 0,
          fmt::format("{}/{} smaller, oracle optimum matched {}/{}", smaller, rows.size(), matched, checked)};
}

// 3. Solver optimality against brute force on random small models.
Outcome solver_optimality() {
  std::mt19937_64 rng(3003);
  std::size_t ok = 0, feasible = 0, n = 200;
  for (std::size_t k = 0; k < n; ++k) {
    CopModel m = oracle::random_model(rng);
    Assignment want = brute_force_solve(m);
    SolverBudget b;
    b.wall_time = std::chrono::milliseconds(10000);
    b.seed = k;
    Assignment got = solve(m, b).assignment;
    if (want.status == SolveStatus::Infeasible) {
      ok += got.status == SolveStatus::Infeasible;
      continue;
    }
    ++feasible;
    ok += got.status == SolveStatus::Optimal && got.objective_value == want.objective_value &&
          satisfies_families(m, got.values);
  }
  return {ok == n, fmt::format("{}/{} agree ({} feasible)", ok, n, feasible)};
}

// 4. Pruning never changes the optimum on brute-forceable instances.
Outcome pruning_soundness() {
  std::mt19937_64 rng(4004);
  std::size_t instances = 0, equal = 0, pruned_some = 0, attempts = 0;
  while (instances < 100 && attempts < 100000) {
    ++attempts;
    Program p = oracle::random_program(rng, {2, 4, 2, 5, 2, 3, 0.8});
    UnfoldedProgram u = unfold(p);
    SearchSpaceOptions o;
    o.max_levels = 2;
    o.prune = false;
    LevelledSearchSpace full = build_search_space(u, o);
    CopModel mf = encode(full, u);
    if (core_var_count(mf) > kBruteForceLimit || full.candidates.empty()) continue;
    o.prune = true;
    LevelledSearchSpace pruned = build_search_space(u, o);
    CopModel mp = encode(pruned, u);
    ++instances;
    pruned_some += pruned.candidates.size() < full.candidates.size();
    equal += brute_force_solve(mf).objective_value == brute_force_solve(mp).objective_value;
  }
  return {instances == 100 && equal == instances,
          fmt::format("{}/{} equal optima, pruning removed candidates in {}", equal, instances, pruned_some)};
}

// 5. Anytime behaviour on a large instance.
Outcome anytime_behaviour() {
  std::mt19937_64 rng(5005);
  const auto budget = std::chrono::milliseconds(20000);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Program p = oracle::random_program(rng, {30, 40, 6, 8, 3, 4, 0.9});
    UnfoldedProgram u = unfold(p);
    LevelledSearchSpace s = build_search_space(u);
    if (s.candidates.size() < 200) continue;
    CopModel m = encode(s, u);
    SolverBudget b;
    b.wall_time = budget;
    SolveResult r = solve(m, b);
    const auto& inc = r.trace.incumbents;
    if (inc.empty()) return {false, "no incumbent"};
    bool monotone = true;
    for (std::size_t k = 1; k < inc.size(); ++k) monotone = monotone && inc[k].objective <= inc[k - 1].objective;
    double cutoff = 0.2 * static_cast<double>(budget.count());
    std::int64_t final_obj = inc.back().objective;
    std::int64_t early = -1;
    for (const auto& t : inc)
      if (t.elapsed_ms <= cutoff) early = t.objective;
    bool close = early >= 0 && static_cast<double>(early) <= 1.1 * static_cast<double>(final_obj);
    return {monotone && close,
            fmt::format("{} candidates, {} vars, status {}, objective {} at <= {:.0f} ms, final {} at {:.0f} ms",
                        s.candidates.size(), m.num_vars(), to_string(r.trace.status), early, cutoff, final_obj,
                        inc.back().elapsed_ms)};
  }
  return {false, "no generated instance reached 200 candidates"};
}

// 6. Learning cost under the refactored background knowledge.
Outcome learning_cost() {
  LifelongConfig cfg;
  cfg.target_width = 4;
  cfg.background = 50;
  cfg.targets = 50;
  cfg.limits.time = std::chrono::milliseconds(10000);
  cfg.refactor.budget.wall_time = std::chrono::milliseconds(30000);
  LifelongOutcome r = run_lifelong(cfg);
  const auto& sum = r.bench.summaries;
  const ConditionSummary& orig = sum[0];
  const ConditionSummary& refd = sum[1];
  std::size_t n = r.targets.size(), both = 0, strict = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const BenchRow& a = r.bench.rows[k];
    const BenchRow& b = r.bench.rows[n + k];
    if (a.solved && b.solved) {
      ++both;
      strict += b.nodes < a.nodes;
    }
  }
  bool nodes_ok = refd.total_nodes <= orig.total_nodes;
  bool strict_ok = both > 0 && 10 * strict >= 6 * both;
  bool solved_ok = r.background_solved <= 30 || refd.solved >= orig.solved;
  return {nodes_ok && strict_ok && solved_ok,
          fmt::format("background {} solved, BK {} -> {} literals; nodes {} vs {}; strict {}/{}; solved {} vs {}",
                      r.background_solved, orig.bk_literals, refd.bk_literals, refd.total_nodes,
                      orig.total_nodes, strict, both, refd.solved, orig.solved)};
}

// 7. Compression ratio on the redundant corpus.
Outcome compression_ratio() {
  const auto& rows = corpus_rows();
  std::size_t orig = 0, refd = 0, checked = 0, matched = 0;
  double best = 1, worst = 0;
  for (const auto& r : rows) {
    orig += r.original;
    refd += r.refactored;
    double ratio = static_cast<double>(r.refactored) / static_cast<double>(r.original);
    best = std::min(best, ratio);
    worst = std::max(worst, ratio);
    if (r.oracle_checked) {
      ++checked;
      matched += r.refactored == r.oracle_size;
    }
  }
  double ratio = static_cast<double>(refd) / static_cast<double>(orig);
  return {ratio <= 0.8 && matched == checked,
          fmt::format("pooled ratio {:.3f} ({} / {}), per program {:.3f}..{:.3f}, oracle ratio matched {}/{}",
                      ratio, refd, orig, best, worst, matched, checked)};
}

// 8. Fold and unfold round trip on the pillar example.
Outcome worked_example() {
  Clause c1 = parse_clause(example::kPillarUnfolded);
  Clause c2 = parse_clause(example::kVer);
  Clause c3 = parse_clause(example::kPillarFolded);
  auto folded = fold_clause(c1, c2);
  bool fold_ok = folded.size() == 1 && variant_equal(folded[0], c3);
  Program p = parse_program(std::string(example::kPrimitives) + "#task pillar/4.\n" +
                            example::kPillarFolded + "\n" + example::kVer);
  UnfoldedProgram u = unfold(p);
  bool unfold_ok = u.clauses.size() == 1 && variant_equal(u.clauses[0], c1);
  return {fold_ok && unfold_ok, fmt::format("fold {}, unfold {}", fold_ok ? "ok" : "wrong",
                                            unfold_ok ? "ok" : "wrong")};
}

}  // namespace
}  // namespace kbr

int main(int argc, char** argv) {
  using namespace kbr;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"equivalence preservation", equivalence_preservation},
      {"size reduction", size_reduction},
      {"solver optimality", solver_optimality},
      {"pruning soundness", pruning_soundness},
      {"anytime behaviour", anytime_behaviour},
      {"learning cost", learning_cost},
      {"compression ratio", compression_ratio},
      {"worked example", worked_example},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    fmt::print("ACCEPTANCE {} {}: {} ({}; {:.1f} s)\n", id, criteria[k].first, o.pass ? "PASS" : "FAIL",
               o.detail, seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
