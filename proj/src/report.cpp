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
#include <sstream>

#include "json.hpp"
#include "kbr/pipeline.hpp"

namespace kbr {

std::string render_report(const RefactorReport& r) {
  std::ostringstream os;
  os << "original_literals: " << r.original_literals << "\n"
     << "unfolded_literals: " << r.unfolded_literals << "\n"
     << "refactored_literals: " << r.refactored_literals << "\n"
     << "original_predicates: " << r.original_predicates << "\n"
     << "refactored_predicates: " << r.refactored_predicates << "\n"
     << "invented_predicates: " << r.invented_predicates << "\n"
     << "unfolded_clauses: " << r.unfolded_clauses << "\n"
     << "candidates: " << r.candidates << "\n"
     << "model_vars: " << r.model_vars << "\n"
     << "model_constraints: " << r.model_constraints << "\n"
     << "objective: " << r.objective << "\n"
     << "objective_size: " << r.breakdown.size << "\n"
     << "objective_redundancy: " << r.breakdown.redundancy << "\n"
     << "solver_status: " << to_string(r.trace.status) << "\n"
     << "solver_decisions: " << r.trace.decisions << "\n"
     << "solver_ms: " << std::fixed << std::setprecision(1) << r.trace.elapsed_ms << "\n"
     << "equivalence_verified: " << (r.equivalence_verified ? "true" : "false") << "\n"
     << "no_gain: " << (r.no_gain ? "true" : "false") << "\n"
     << "stop_reason: " << r.stop_reason << "\n"
     << std::setprecision(3)
     << "hypothesis_log_before: " << r.hypothesis_before.log_size << " (p="
     << r.hypothesis_before.predicates << " l=" << r.hypothesis_before.body_length
     << " m=" << r.hypothesis_before.clauses << ")\n"
     << "hypothesis_log_after: " << r.hypothesis_after.log_size << " (p="
     << r.hypothesis_after.predicates << " l=" << r.hypothesis_after.body_length
     << " m=" << r.hypothesis_after.clauses << ")\n";
  os << "\nlevel  extracted  after_singletons  after_unprofitable  options  truncated\n";
  for (const auto& l : r.levels) {
    os << std::setw(5) << l.level << std::setw(11) << l.extracted << std::setw(18)
       << l.after_singletons << std::setw(20) << l.after_unprofitable << std::setw(9)
       << l.folding_options << std::setw(11) << l.truncated_clauses << "\n";
    for (const auto& w : l.warnings) os << "  warning: " << w << "\n";
  }
  return os.str();
}

std::string report_records(const RefactorReport& r) {
  using nlohmann::json;
  std::string out;
  json summary{{"record", "summary"},
               {"original_literals", r.original_literals},
               {"unfolded_literals", r.unfolded_literals},
               {"refactored_literals", r.refactored_literals},
               {"original_predicates", r.original_predicates},
               {"refactored_predicates", r.refactored_predicates},
               {"invented_predicates", r.invented_predicates},
               {"candidates", r.candidates},
               {"model_vars", r.model_vars},
               {"model_constraints", r.model_constraints},
               {"objective", r.objective},
               {"objective_size", r.breakdown.size},
               {"objective_redundancy", r.breakdown.redundancy},
               {"solver_status", std::string(to_string(r.trace.status))},
               {"equivalence_verified", r.equivalence_verified},
               {"no_gain", r.no_gain},
               {"stop_reason", r.stop_reason},
               {"hypothesis_log_before", r.hypothesis_before.log_size},
               {"hypothesis_log_after", r.hypothesis_after.log_size}};
  out += summary.dump() + "\n";
  for (const auto& l : r.levels) {
    json j{{"record", "level"},
           {"level", l.level},
           {"extracted", l.extracted},
           {"after_singletons", l.after_singletons},
           {"after_unprofitable", l.after_unprofitable},
           {"folding_options", l.folding_options},
           {"truncated_clauses", l.truncated_clauses},
           {"warnings", l.warnings}};
    out += j.dump() + "\n";
  }
  for (const auto& p : r.trace.incumbents) {
    json j{{"record", "trace"}, {"elapsed_ms", p.elapsed_ms}, {"objective", p.objective}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace kbr
