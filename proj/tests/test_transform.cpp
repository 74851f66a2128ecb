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

#include <gtest/gtest.h>

#include <random>

#include "kbr/candidates.hpp"
#include "kbr/error.hpp"
#include "kbr/pipeline.hpp"
#include "kbr/transform.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

namespace kbr {
namespace {

Program pillar_with_ver() {
  return parse_program(std::string(example::kPrimitives) + "#task pillar/4.\n" +
                       example::kPillarFolded + "\n" + example::kVer);
}

TEST(Unfold, WorkedExample) {
  UnfoldedProgram u = unfold(pillar_with_ver());
  ASSERT_EQ(u.clauses.size(), 1u);
  EXPECT_TRUE(variant_equal(u.clauses[0], parse_clause(example::kPillarUnfolded)));
  EXPECT_EQ(u.size(), 8u);
}

TEST(Unfold, PrimitiveProgramIsFixpoint) {
  Program p = parse_program("#task t/1.\nt(X) :- a(X,Y), b(Y).\nt(X) :- c(X).");
  UnfoldedProgram u = unfold(p);
  EXPECT_TRUE(same_clause_multiset(u.clauses, p.clauses));
}

TEST(Unfold, TwoDefinitionsGiveTwoClauses) {
  Program p = parse_program(
      "#task t/1.\nt(X) :- s(X,Y), c(Y).\ns(X,Y) :- a(X,Y).\ns(X,Y) :- b(X,Z), b(Z,Y).");
  UnfoldedProgram u = unfold(p);
  std::vector<Clause> want = {parse_clause("t(X) :- a(X,Y), c(Y)."),
                              parse_clause("t(X) :- b(X,Z), b(Z,Y), c(Y).")};
  EXPECT_TRUE(same_clause_multiset(u.clauses, want));
  EXPECT_EQ(u.origin, (std::vector<std::size_t>{0, 0}));
}

TEST(Unfold, HeadUnification) {
  Program p = parse_program("#task t/1.\nt(X) :- s(X,a).\ns(Y,Y) :- q(Y).");
  UnfoldedProgram u = unfold(p);
  ASSERT_EQ(u.clauses.size(), 1u);
  EXPECT_TRUE(variant_equal(u.clauses[0], parse_clause("t(a) :- q(a).")));
}

TEST(Unfold, NonUnifiableDefinitionDropped) {
  Program p = parse_program("#task t/1.\nt(X) :- s(X,a).\ns(Y,b) :- q(Y).\ns(Y,a) :- r(Y).");
  UnfoldedProgram u = unfold(p);
  ASSERT_EQ(u.clauses.size(), 1u);
  EXPECT_TRUE(variant_equal(u.clauses[0], parse_clause("t(X) :- r(X).")));
}

TEST(Unfold, CycleError) {
  Program p = parse_program("#task t/1.\nt(X) :- s(X).\ns(X) :- u(X).\nu(X) :- s(X).");
  EXPECT_THROW(unfold(p), CycleError);
}

TEST(Unfold, MissingDefinition) {
  Program p = parse_program("#task t/1.\n#task u/1.\nt(X) :- u(X).");
  EXPECT_THROW(unfold(p), MissingDefinitionError);
}

TEST(Unfold, ClauseLimit) {
  std::string text = "#task t/1.\nt(X) :- s(X), s(X), s(X), s(X).\n";
  for (int k = 0; k < 10; ++k) text += "s(X) :- q" + std::to_string(k) + "(X).\n";
  UnfoldOptions o;
  o.max_clauses = 100;
  EXPECT_THROW(unfold(parse_program(text), o), LimitError);
}

TEST(Unfold, FactsPassThrough) {
  Program p = parse_program("#task t/1.\nq(a).\nt(X) :- q(X).");
  UnfoldedProgram u = unfold(p);
  EXPECT_EQ(u.clauses.size(), 1u);
  EXPECT_EQ(u.passthrough.size(), 1u);
}

TEST(Fold, WorkedExample) {
  auto r = fold_clause(parse_clause(example::kPillarUnfolded), parse_clause(example::kVer));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(variant_equal(r[0], parse_clause(example::kPillarFolded)));
}

TEST(Fold, NoMatch) {
  EXPECT_TRUE(fold_clause(parse_clause("p(X) :- a(X,Y)."), parse_clause("s(X) :- b(X,Y), c(Y).")).empty());
}

TEST(Fold, TwoDisjointInstances) {
  auto r = fold_clause(parse_clause("p(X) :- a(X,Y), b(Y), a(X,Z), b(Z)."),
                       parse_clause("s(U) :- a(U,V), b(V)."));
  Clause want = parse_clause("p(X) :- s(X), s(X).");
  EXPECT_TRUE(std::any_of(r.begin(), r.end(), [&](const Clause& c) { return variant_equal(c, want); }));
}

TEST(Fold, LocalVariableMustBeLocal) {
  // Y is local to s's body but also occurs in the head of c.
  EXPECT_TRUE(fold_clause(parse_clause("p(X,Y) :- a(X,Y), b(Y)."),
                          parse_clause("s(U) :- a(U,V), b(V).")).empty());
}

TEST(Fold, OverlappingMatchesGiveMaximalSets) {
  // a-a-a chain: s matches (1,2) or (2,3); each is maximal.
  auto r = fold_clause(parse_clause("p(X,W) :- a(X,Y), a(Y,Z), a(Z,W)."),
                       parse_clause("s(U,V) :- a(U,T), a(T,V)."));
  EXPECT_EQ(r.size(), 2u);
}

TEST(SyntacticEquiv, FoldPreserves) {
  Program p = parse_program(std::string(example::kPrimitives) + "#task pillar/4.\n" +
                            example::kPillarUnfolded);
  EXPECT_TRUE(syntactic_equiv(p, pillar_with_ver()));
}

TEST(SyntacticEquiv, DeletedClause) {
  Program p = parse_program("#task t/1.\nt(X) :- a(X).\nt(X) :- b(X).");
  Program q = parse_program("#task t/1.\nt(X) :- a(X).");
  EXPECT_FALSE(syntactic_equiv(p, q));
}

TEST(SyntacticEquiv, SupportNamesIrrelevant) {
  Program p = parse_program("#task t/1.\nt(X) :- s(X).\ns(X) :- a(X,Y), b(Y).");
  Program q = parse_program("#task t/1.\nt(X) :- other(X).\nother(X) :- a(X,Y), b(Y).");
  EXPECT_TRUE(syntactic_equiv(p, q));
}

TEST(SyntacticEquiv, DifferentTaskSets) {
  Program p = parse_program("#task t/1.\nt(X) :- a(X).");
  Program q = parse_program("#task u/1.\nu(X) :- a(X).");
  EXPECT_FALSE(syntactic_equiv(p, q));
}

TEST(SyntacticEquiv, MultiplicityCounts) {
  Program p = parse_program("#task t/1.\nt(X) :- a(X).\nt(X) :- a(X).");
  Program q = parse_program("#task t/1.\nt(X) :- a(X).");
  EXPECT_FALSE(syntactic_equiv(p, q));
}

TEST(Consequences, SingleRule) {
  Program p = parse_program("#task t/1.\nq(a).\nt(X) :- q(X).");
  auto got = restricted_consequences(p, {Symbol("t")}, std::nullopt,
                                     std::vector<Term>{Term::constant("a")});
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(render_atom(*got.begin()), "t(a)");
}

TEST(Consequences, NoTaskClauses) {
  Program p = parse_program("q(a).\nr(X) :- q(X).");
  EXPECT_TRUE(restricted_consequences(p, {Symbol("t")}, 5).empty());
}

TEST(Consequences, NeedsDepthOrDomain) {
  Program p = parse_program("#task t/1.\nt(X) :- q(X).");
  EXPECT_THROW(restricted_consequences(p, {Symbol("t")}, std::nullopt), DomainError);
}

TEST(Consequences, MatchesForwardChainingOracle) {
  Program p = parse_program(
      "#task t/2.\ne(a,b).\ne(b,c).\ne(c,d).\nm(b).\n"
      "t(X,Y) :- e(X,Z), e(Z,Y).\nt(X,Y) :- e(X,Y), m(Y).");
  std::vector<Term> dom;
  for (const char* c : {"a", "b", "c", "d"}) dom.push_back(Term::constant(c));
  auto want = oracle::forward_chain(p, {Symbol("t")}, dom);
  auto got = restricted_consequences(p, {Symbol("t")}, std::nullopt, dom);
  EXPECT_EQ(got, want);
  EXPECT_EQ(want.size(), 3u);
}

TEST(Property, UnfoldIdempotentAndSupportFree) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 150; ++k) {
    Program p = oracle::random_program(rng, {2, 8, 1, 6, 3, 5, 0.6});
    RefactorConfig cfg;
    cfg.budget.wall_time = std::chrono::milliseconds(200);
    Program r = refactor(p, cfg).program;
    UnfoldedProgram u = unfold(r);
    for (const Clause& c : u.clauses)
      for (const Atom& a : c.body) ASSERT_NE(u.registry.role(a.predicate), Role::Support);
    UnfoldedProgram uu = unfold(u.to_program());
    ASSERT_TRUE(same_clause_multiset(u.clauses, uu.clauses));
  }
}

TEST(Property, FoldUnfoldRoundTrip) {
  std::mt19937_64 rng(29);
  std::size_t checked = 0;
  for (int k = 0; k < 60; ++k) {
    Program p = oracle::random_program(rng, {2, 6, 2, 6, 3, 4, 0.7});
    UnfoldedProgram u = unfold(p);
    auto cands = extract_candidates(u.clauses, 2, 3, 1);
    for (std::size_t c = 0; c < cands.size() && c < 8; ++c) {
      Program q;
      q.registry = p.registry;
      const Clause& s = cands[c].clause;
      q.registry.declare(s.head.predicate, s.head.arity(), Role::Support);
      for (const Clause& cl : u.clauses) {
        auto f = fold_clause(cl, s);
        q.clauses.push_back(f.empty() ? cl : f.front());
      }
      q.clauses.push_back(s);
      ASSERT_TRUE(syntactic_equiv(p, q)) << render_program(q);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50u);
}

// Function-free programs over a tiny constant domain: facts for the
// primitives plus random task clauses. Refactoring must not change the
// derivable task atoms.
TEST(Property, SyntacticEquivalenceImpliesSameConsequences) {
  std::mt19937_64 rng(31);
  std::vector<Term> dom{Term::constant("a"), Term::constant("b"), Term::constant("c")};
  for (int k = 0; k < 40; ++k) {
    Program p = oracle::random_program(rng, {2, 5, 1, 4, 3, 3, 0.8});
    std::string facts;
    for (Symbol s : p.registry.with_role(Role::Primitive)) {
      std::size_t ar = p.registry.find(s)->arity;
      for (int f = 0; f < 4; ++f) {
        facts += std::string(s.str()) + "(";
        for (std::size_t a = 0; a < ar; ++a)
          facts += std::string(a ? "," : "") + "abc"[std::uniform_int_distribution<int>(0, 2)(rng)];
        facts += ").\n";
      }
    }
    Program pf = parse_program(render_program(p) + facts);
    RefactorConfig cfg;
    cfg.budget.wall_time = std::chrono::milliseconds(200);
    Program r = refactor(pf, cfg).program;
    ASSERT_TRUE(syntactic_equiv(pf, r));
    std::set<Symbol> tasks;
    for (Symbol s : pf.registry.with_role(Role::Task)) tasks.insert(s);
    auto before = restricted_consequences(pf, tasks, std::nullopt, dom);
    auto after = restricted_consequences(r, tasks, std::nullopt, dom);
    ASSERT_EQ(before, after);
    ASSERT_EQ(before, oracle::forward_chain(pf, tasks, dom));
  }
}

}  // namespace
}  // namespace kbr
