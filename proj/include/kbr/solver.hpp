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
#include <optional>
#include <string>
#include <vector>

#include "kbr/cop_model.hpp"

namespace kbr {

struct SolverBudget {
  std::chrono::milliseconds wall_time{60000};
  std::optional<std::uint64_t> max_decisions;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct TracePoint {
  double elapsed_ms = 0;
  std::int64_t objective = 0;
};

struct SolveTrace {
  /// Strictly decreasing objectives.
  std::vector<TracePoint> incumbents;
  SolveStatus status = SolveStatus::Infeasible;
  std::uint64_t decisions = 0;
  double elapsed_ms = 0;
};

struct SolveResult {
  Assignment assignment;
  SolveTrace trace;
};

/// Branch and bound over the PB rows with unit propagation, seeded by a
/// greedy local search over candidate sets. Deterministic for a fixed seed
/// when workers == 1 and the time budget is not reached.
SolveResult solve(const CopModel& m, const SolverBudget& b = {});

/// Largest SC + FOLD + LEVEL count brute_force_solve accepts.
inline constexpr std::size_t kBruteForceLimit = 24;

/// Exhaustive enumeration of the SC, FOLD and LEVEL variables; selection
/// and redundancy variables are completed at minimum cost. Throws
/// LimitError above kBruteForceLimit core variables.
Assignment brute_force_solve(const CopModel& m);

/// Number of SC, FOLD and LEVEL variables.
std::size_t core_var_count(const CopModel& m);

/// One `{"elapsed_ms":..,"objective":..}` record per line.
std::string trace_records(const SolveTrace& t);

}  // namespace kbr
