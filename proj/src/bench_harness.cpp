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


#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"
#include "kbr/bench.hpp"

namespace kbr {

BenchResult run_benchmark(const std::vector<std::pair<std::string, Program>>& conditions,
                          const std::vector<SynthesisTask>& tasks, const SynthLimits& limits) {
  BenchResult out;
  for (const auto& [label, bk] : conditions) {
    ConditionSummary s;
    s.condition = label;
    s.bk_literals = bk.size();
    s.bk_predicates = bk.predicate_count();
    if (!tasks.empty()) s.vocabulary = learner_vocabulary(tasks.front().domain, bk).size();
    for (const auto& task : tasks) {
      SynthResult r = synthesize(task, bk, limits);
      out.rows.push_back({label, task.name, r.solved, r.nodes, r.ms});
      ++s.tasks;
      s.solved += r.solved;
      s.total_nodes += r.nodes;
      s.total_ms += r.ms;
    }
    out.summaries.push_back(std::move(s));
  }
  return out;
}

LifelongOutcome run_lifelong(const LifelongConfig& cfg) {
  LifelongOutcome out;
  std::vector<SynthesisTask> background;
  if (cfg.domain == Domain::Lego) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> width(cfg.min_background_width,
                                                     cfg.max_background_width);
    for (std::size_t k = 0; k < cfg.background; ++k) {
      auto t = gen_lego_tasks(width(rng), 1, rng(), cfg.max_height);
      background.push_back(std::move(t.front()));
    }
    out.targets = gen_lego_tasks(cfg.target_width, cfg.targets, cfg.seed + 7919, cfg.max_height);
  } else {
    background = gen_string_tasks(cfg.background, cfg.seed);
    out.targets = gen_string_tasks(cfg.targets, cfg.seed + 7919);
  }

  const Program prims = domain_primitives(cfg.domain);
  Program bk = prims;
  for (std::size_t k = 0; k < background.size(); ++k) {
    const std::string name = "bg_" + std::to_string(k);
    SynthResult r = synthesize(background[k], cfg.reuse_background ? bk : prims,
                               cfg.background_limits, name);
    if (r.solved) {
      ++out.background_solved;
      auto clauses = chain_clauses(*r.solution);
      for (const auto& c : clauses) {
        Role role = c.head.predicate == r.solution->head.predicate ? Role::Task : Role::Support;
        bk.registry.declare(c.head.predicate, c.head.arity(), role);
        bk.clauses.push_back(c);
      }
    }
    out.bk_literals.push_back(bk.size());
  }
  out.original_bk = bk;
  RefactorResult refactored = refactor(bk, cfg.refactor);
  out.refactored_bk = std::move(refactored.program);
  out.report = std::move(refactored.report);

  std::vector<std::pair<std::string, Program>> conditions{{"original", out.original_bk},
                                                          {"refactored", out.refactored_bk}};
  if (cfg.baseline) {
    out.baseline_bk = remove_redundancy_baseline(bk, cfg.refactor.min_body, cfg.refactor.max_body);
    conditions.emplace_back("baseline", out.baseline_bk);
  }
  out.bench = run_benchmark(conditions, out.targets, cfg.limits);
  return out;
}

std::string bench_records(const BenchResult& r) {
  using nlohmann::json;
  std::string out;
  for (const auto& row : r.rows) {
    json j{{"record", "task"},     {"condition", row.condition}, {"task", row.task},
           {"solved", row.solved}, {"nodes", row.nodes},         {"ms", row.ms}};
    out += j.dump() + "\n";
  }
  for (const auto& s : r.summaries) {
    json j{{"record", "condition"},       {"condition", s.condition},
           {"tasks", s.tasks},            {"solved", s.solved},
           {"total_nodes", s.total_nodes}, {"total_ms", s.total_ms},
           {"bk_literals", s.bk_literals}, {"bk_predicates", s.bk_predicates},
           {"vocabulary", s.vocabulary}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string bench_table(const BenchResult& r) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "condition" << std::right << std::setw(8) << "solved"
     << std::setw(8) << "tasks" << std::setw(14) << "nodes" << std::setw(12) << "ms"
     << std::setw(12) << "bk_lits" << std::setw(12) << "bk_preds" << std::setw(8) << "vocab"
     << "\n";
  for (const auto& s : r.summaries) {
    os << std::left << std::setw(12) << s.condition << std::right << std::setw(8) << s.solved
       << std::setw(8) << s.tasks << std::setw(14) << s.total_nodes << std::setw(12)
       << std::fixed << std::setprecision(1) << s.total_ms << std::setw(12) << s.bk_literals
       << std::setw(12) << s.bk_predicates << std::setw(8) << s.vocabulary << "\n";
  }
  return os.str();
}

}  // namespace kbr
