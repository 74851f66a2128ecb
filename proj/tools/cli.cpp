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

#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kbr/bench.hpp"
#include "kbr/error.hpp"
#include "kbr/pipeline.hpp"
#include "kbr/program.hpp"

namespace kbr::cli {
namespace {

struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

Program load(const std::string& path) { return parse_program(read_file(path)); }

/// Program text to `path`, or to `out` when no path is given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

bool wants_records(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  return ext == ".json" || ext == ".jsonl";
}

struct Options {
  std::string input;
  std::string second;
  std::string output;
  std::size_t min_body = 2;
  std::size_t max_body = 3;
  std::optional<std::size_t> max_levels;
  double timeout_seconds = 60;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool predicate_cap = false;
  std::string report;
  std::string model_dump;
  // bench
  std::string domain = "lego";
  std::size_t background = 50;
  std::size_t targets = 50;
  std::size_t width = 4;
  int max_height = 1;
  std::size_t max_depth = 4;
  double task_seconds = 10;
};

RefactorConfig refactor_config(const Options& o) {
  if (o.min_body < 1 || o.max_body < o.min_body)
    throw InputError("need 1 <= min-body <= max-body");
  RefactorConfig cfg;
  cfg.min_body = o.min_body;
  cfg.max_body = o.max_body;
  cfg.max_levels = o.max_levels;
  cfg.budget.wall_time = std::chrono::milliseconds(
      static_cast<std::int64_t>(o.timeout_seconds * 1000));
  cfg.budget.seed = o.seed;
  cfg.budget.workers = o.workers;
  cfg.enforce_predicate_cap = o.predicate_cap;
  cfg.dump_model = !o.model_dump.empty();
  return cfg;
}

int cmd_refactor(const Options& o, std::ostream& out, std::ostream& err) {
  Program p = load(o.input);
  RefactorResult r = refactor(p, refactor_config(o));
  emit(o.output, render_program(r.program), out);
  if (!o.report.empty())
    write_file(o.report, wants_records(o.report) ? report_records(r.report)
                                                 : render_report(r.report));
  if (!o.model_dump.empty()) write_file(o.model_dump, r.model_dump);
  err << "literals " << r.report.original_literals << " -> "
      << r.report.refactored_literals << ", solver "
      << to_string(r.report.trace.status) << "\n";
  if (r.report.no_gain) {
    err << "no gain; input emitted unchanged\n";
    return kNoGain;
  }
  return kSuccess;
}

int cmd_baseline(const Options& o, std::ostream& out, std::ostream& err) {
  Program p = load(o.input);
  Program b = remove_redundancy_baseline(p, o.min_body, o.max_body);
  if (!syntactic_equiv(p, b)) {
    err << "baseline output is not equivalent to the input\n";
    return kInternalError;
  }
  emit(o.output, render_program(b), out);
  err << "literals " << p.size() << " -> " << b.size() << "\n";
  return b.size() < p.size() ? kSuccess : kNoGain;
}

int cmd_verify(const Options& o, std::ostream& out) {
  Program a = load(o.input);
  Program b = load(o.second);
  bool ok = syntactic_equiv(a, b);
  out << (ok ? "equivalent" : "not equivalent") << "\n";
  return ok ? kSuccess : kVerificationFailed;
}

int cmd_stats(const Options& o, std::ostream& out) {
  Program p = load(o.input);
  UnfoldedProgram u = unfold(p);
  HypothesisSpaceRow h = hypothesis_row(p);
  out << "clauses: " << p.clauses.size() << "\n"
      << "literals: " << p.size() << "\n"
      << "predicates: " << p.predicate_count() << "\n"
      << "primitive_predicates: " << p.registry.with_role(Role::Primitive).size() << "\n"
      << "task_predicates: " << p.registry.with_role(Role::Task).size() << "\n"
      << "support_predicates: " << p.registry.with_role(Role::Support).size() << "\n"
      << "unfolded_clauses: " << u.clauses.size() << "\n"
      << "unfolded_literals: " << u.size() << "\n"
      << "hypothesis_log: " << h.log_size << " (p=" << h.predicates
      << " l=" << h.body_length << " m=" << h.clauses << ")\n";
  return kSuccess;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  LifelongConfig cfg;
  if (o.domain == "lego")
    cfg.domain = Domain::Lego;
  else if (o.domain == "string")
    cfg.domain = Domain::String;
  else
    throw InputError("unknown domain " + o.domain);
  cfg.background = o.background;
  cfg.targets = o.targets;
  cfg.target_width = o.width;
  cfg.max_height = o.max_height;
  cfg.seed = o.seed;
  cfg.limits.max_depth = o.max_depth;
  cfg.limits.time = std::chrono::milliseconds(
      static_cast<std::int64_t>(o.task_seconds * 1000));
  cfg.refactor = refactor_config(o);
  LifelongOutcome r = run_lifelong(cfg);
  err << "background solved " << r.background_solved << "/" << cfg.background
      << "\n";
  out << bench_table(r.bench);
  if (!o.report.empty())
    write_file(o.report, wants_records(o.report) ? report_records(r.report)
                                                 : render_report(r.report));
  if (!o.output.empty()) write_file(o.output, bench_records(r.bench));
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Knowledge-base refactoring by predicate invention", "kbrefactor"};
  app.require_subcommand(1);
  Options o;

  auto add_solver_flags = [&](CLI::App* c) {
    c->add_option("--min-body", o.min_body, "Smallest invented body")
        ->capture_default_str();
    c->add_option("--max-body", o.max_body, "Largest invented body")
        ->capture_default_str();
    c->add_option("--max-levels", o.max_levels, "Invention depth cap");
    c->add_option("--timeout-seconds", o.timeout_seconds, "Solver budget")
        ->check(CLI::Range(1.0, 1e9))
        ->capture_default_str();
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    c->add_option("--workers", o.workers, "Solver threads")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
        ->capture_default_str();
    c->add_flag("--predicate-cap", o.predicate_cap,
                "Invent at most as many predicates as the input has support predicates");
    c->add_option("--report", o.report,
                  "Report file; .json/.jsonl gives JSON lines");
  };

  auto* refactor_cmd = app.add_subcommand("refactor", "Refactor a knowledge base");
  refactor_cmd->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  refactor_cmd->add_option("-o,--output", o.output, "Output program");
  add_solver_flags(refactor_cmd);
  refactor_cmd->add_option("--model-dump", o.model_dump, "Write the model");

  auto* baseline_cmd =
      app.add_subcommand("baseline", "Greedy redundancy removal");
  baseline_cmd->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  baseline_cmd->add_option("-o,--output", o.output, "Output program");
  baseline_cmd->add_option("--min-body", o.min_body)->capture_default_str();
  baseline_cmd->add_option("--max-body", o.max_body)->capture_default_str();

  auto* verify_cmd =
      app.add_subcommand("verify", "Check syntactic equivalence of two programs");
  verify_cmd->add_option("original", o.input)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("refactored", o.second)->required()->check(CLI::ExistingFile);

  auto* stats_cmd = app.add_subcommand("stats", "Size and hypothesis-space metrics");
  stats_cmd->add_option("input", o.input)->required()->check(CLI::ExistingFile);

  auto* bench_cmd = app.add_subcommand("bench", "Lifelong learning benchmark");
  bench_cmd->add_option("--domain", o.domain, "lego or string")
      ->capture_default_str();
  bench_cmd->add_option("--background", o.background)->capture_default_str();
  bench_cmd->add_option("--targets", o.targets)->capture_default_str();
  bench_cmd->add_option("--width", o.width, "Lego target board width")
      ->capture_default_str();
  bench_cmd->add_option("--max-height", o.max_height)->capture_default_str();
  bench_cmd->add_option("--max-depth", o.max_depth, "Synthesis depth")
      ->capture_default_str();
  bench_cmd->add_option("--task-seconds", o.task_seconds)->capture_default_str();
  bench_cmd->add_option("-o,--output", o.output, "Per-task JSON lines");
  add_solver_flags(bench_cmd);

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }

  try {
    if (*refactor_cmd) return cmd_refactor(o, out, err);
    if (*baseline_cmd) return cmd_baseline(o, out, err);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*stats_cmd) return cmd_stats(o, out);
    if (*bench_cmd) return cmd_bench(o, out, err);
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInputError;
}

}  // namespace kbr::cli
