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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kbr/pipeline.hpp"

namespace kbr {

enum class Domain : std::uint8_t { Lego, String };

std::string_view to_string(Domain d);

/// Lego: `data` holds one stack height per cell and `pos` the cursor.
/// Strings: `data` is the input, `pos` the read position, `out` the output.
struct State {
  std::string data;
  std::string out;
  int pos = 0;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept;
};

State lego_state(const std::vector<int>& heights, int cursor = 0);
std::vector<int> lego_heights(const State& s);
State string_state(std::string input, int pos = 0, std::string out = {});

/// Tallest stack place_brick may build.
inline constexpr int kMaxLegoHeight = 9;

struct Example {
  State input;
  State output;
};

struct SynthesisTask {
  std::string name;
  Domain domain = Domain::Lego;
  std::vector<Example> examples;
};

/// Blank board to a uniformly drawn final board with heights in
/// [0, max_height]. Deterministic per seed.
std::vector<SynthesisTask> gen_lego_tasks(std::size_t width, std::size_t n,
                                          std::uint64_t seed, int max_height = 1);

/// Random primitive sequences of 2..max_length steps applied to random
/// inputs. Deterministic per seed.
std::vector<SynthesisTask> gen_string_tasks(std::size_t n, std::uint64_t seed,
                                            std::size_t examples = 2,
                                            std::size_t max_length = 4);

/// Primitive declarations of each domain.
Program lego_primitives();
Program string_primitives();
Program domain_primitives(Domain d);

/// Binary primitive on a state; nullopt when inapplicable.
std::optional<State> apply_action(Domain d, std::string_view name, const State& s);
/// Unary primitive.
bool holds(Domain d, std::string_view name, const State& s);
/// Lego compares heights only; strings compare the output buffer.
bool outputs_match(Domain d, const State& got, const State& want);

/// Evaluates BK predicates whose first argument is the input state and
/// whose other arguments are outputs. Results are memoised per call.
class Interpreter {
 public:
  Interpreter(Domain d, const Program& bk);

  /// Output tuples (arguments 2..n) of `pred` called on `in`.
  const std::vector<std::vector<State>>& call(Symbol pred, const State& in);
  /// Final states of a binary predicate, or `in` when a unary one holds.
  std::vector<State> run(Symbol pred, const State& in);

  std::size_t arity(Symbol pred) const;
  bool known(Symbol pred) const;

 private:
  struct Key {
    std::uint32_t pred;
    State state;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  using Bindings = std::vector<std::pair<Symbol, State>>;

  void run_body(const std::vector<Atom>& body, std::uint64_t done, Bindings& b,
                const std::function<void(const Bindings&)>& emit);

  Domain domain_;
  std::unordered_map<Symbol, std::size_t> primitive_arity_;
  std::unordered_map<Symbol, std::vector<Clause>> defs_;
  std::unordered_map<Key, std::vector<std::vector<State>>, KeyHash> memo_;
};

struct SynthLimits {
  std::size_t max_depth = 4;
  std::uint64_t max_nodes = 500000;
  std::chrono::milliseconds time{10000};
};

struct SynthResult {
  bool solved = false;
  /// Solution as a task clause over the vocabulary.
  std::optional<Clause> solution;
  std::vector<Symbol> sequence;
  std::uint64_t nodes = 0;
  double ms = 0;
};

/// Primitives followed by BK predicates of arity 1 or 2 (sorted by name),
/// with p(X..) :- q(X..) aliases replaced by q.
std::vector<Symbol> learner_vocabulary(Domain d, const Program& bk);

/// Iterative deepening over literal sequences drawn from the vocabulary.
/// Every evaluated prefix is one node; prefixes failing an example are cut.
SynthResult synthesize(const SynthesisTask& task, const Program& bk,
                       const SynthLimits& limits, std::string_view name = "f");

/// Clause for a sequence: binary literals thread the state, unary ones test it.
Clause sequence_clause(Symbol head, const std::vector<Symbol>& seq,
                       const std::vector<std::size_t>& arities);

/// The clause in chain form: the body tail is moved into helper predicates
/// `<head>_1`, `<head>_2`, ... until each body has two literals. Helpers are
/// support predicates.
std::vector<Clause> chain_clauses(const Clause& c);

struct BenchRow {
  std::string condition;
  std::string task;
  bool solved = false;
  std::uint64_t nodes = 0;
  double ms = 0;
};

struct ConditionSummary {
  std::string condition;
  std::size_t tasks = 0;
  std::size_t solved = 0;
  std::uint64_t total_nodes = 0;
  double total_ms = 0;
  std::size_t bk_literals = 0;
  std::size_t bk_predicates = 0;
  std::size_t vocabulary = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<ConditionSummary> summaries;
};

BenchResult run_benchmark(const std::vector<std::pair<std::string, Program>>& conditions,
                          const std::vector<SynthesisTask>& tasks, const SynthLimits& limits);

struct LifelongConfig {
  Domain domain = Domain::Lego;
  std::size_t background = 50;
  std::size_t targets = 50;
  std::size_t target_width = 4;
  std::size_t min_background_width = 2;
  std::size_t max_background_width = 4;
  int max_height = 1;
  std::uint64_t seed = 1;
  /// Limits for the target tasks.
  SynthLimits limits;
  /// Limits for the background tasks.
  SynthLimits background_limits{7, 2000000, std::chrono::milliseconds(10000)};
  /// Background tasks see earlier background solutions. Off by default: each
  /// one is learnt from the primitives alone.
  bool reuse_background = false;
  RefactorConfig refactor;
  bool baseline = true;
};

struct LifelongOutcome {
  Program original_bk;
  Program refactored_bk;
  Program baseline_bk;
  RefactorReport report;
  std::size_t background_solved = 0;
  /// BK literal count after each background task.
  std::vector<std::size_t> bk_literals;
  std::vector<SynthesisTask> targets;
  BenchResult bench;
};

/// Solves background tasks, adding each solution to the BK, then runs the
/// targets under the original, refactored and (optionally) baseline BK.
LifelongOutcome run_lifelong(const LifelongConfig& cfg);

/// One JSON record per row and per condition summary.
std::string bench_records(const BenchResult& r);
std::string bench_table(const BenchResult& r);

}  // namespace kbr
