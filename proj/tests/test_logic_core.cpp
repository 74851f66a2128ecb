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

#include "kbr/clause_ops.hpp"
#include "kbr/error.hpp"
#include "kbr/matching.hpp"
#include "kbr/program.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

namespace kbr {
namespace {

TEST(Parse, SingleClause) {
  Program p = parse_program("pillar(X,Y,E,E1) :- place(hor,X,E,E0), right(X,Z).");
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_EQ(p.clauses[0].body.size(), 2u);
  EXPECT_EQ(p.size(), 3u);
}

TEST(Parse, WorkedExampleClauses) {
  Program p = parse_program(std::string(example::kPillarUnfolded) + "\n" + example::kVer +
                            "\n" + example::kPillarFolded);
  ASSERT_EQ(p.clauses.size(), 3u);
  EXPECT_EQ(p.clauses[2].body[2].predicate, Symbol("ver"));
  EXPECT_EQ(p.clauses[2].body[2].arity(), 3u);
}

TEST(Parse, ArityConflict) {
  EXPECT_THROW(parse_program("p(X) :- q(X,Y). p(X) :- q(X)."), ArityError);
}

TEST(Parse, RoleConflict) {
  EXPECT_THROW(parse_program("#task p/1.\n#primitive p/1.\np(X) :- q(X)."), RoleError);
}

TEST(Parse, ErrorPosition) {
  try {
    parse_program("p(X) :- q(X).\nr(Y :- s(Y).");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Parse, RoleInference) {
  Program p = parse_program("#task t/1.\nt(X) :- s(X).\ns(X) :- q(X,Y), r(Y).");
  EXPECT_EQ(p.registry.role(Symbol("t")), Role::Task);
  EXPECT_EQ(p.registry.role(Symbol("s")), Role::Support);
  EXPECT_EQ(p.registry.role(Symbol("q")), Role::Primitive);
}

TEST(Parse, FactsAndComments) {
  Program p = parse_program("% comment\nq(a).\nq(b). % more\n");
  EXPECT_EQ(p.clauses.size(), 2u);
  EXPECT_TRUE(p.clauses[0].body.empty());
}

TEST(Render, EmptyProgram) { EXPECT_EQ(render_program(Program{}), ""); }

TEST(Render, CanonicalVariableNames) {
  EXPECT_EQ(render_clause(parse_clause("p(B,A) :- q(A,B).")), "p(A,B) :- q(B,A).");
}

TEST(Render, VerOnOneLine) {
  std::string s = render_clause(parse_clause(example::kVer));
  EXPECT_EQ(s.find('\n'), std::string::npos);
  EXPECT_EQ(s, "ver(A,B,C) :- place(brick,A,B,D), place(brick,A,D,E), place(brick,A,E,C).");
}

TEST(Render, DirectivesFirst) {
  Program p = parse_program("#task t/1.\nt(X) :- q(X).");
  EXPECT_EQ(render_program(p), "#primitive q/1.\n#task t/1.\nt(A) :- q(A).\n");
}

TEST(Variant, PureRenaming) {
  EXPECT_TRUE(variant_equal(parse_clause("p(X):-q(X,Y)"), parse_clause("p(A):-q(A,B)")));
}

TEST(Variant, SwappedPositions) {
  EXPECT_FALSE(variant_equal(parse_clause("p(X):-q(X,Y)"), parse_clause("p(X):-q(Y,X)")));
}

TEST(Variant, ConsistentSwap) {
  Clause a = parse_clause(example::kVer);
  Clause b = parse_clause(
      "ver(X,E,F) :- place(brick,X,E,E2), place(brick,X,E2,E1), place(brick,X,E1,F).");
  EXPECT_TRUE(oracle::variant_equal(a, b));
  EXPECT_TRUE(variant_equal(a, b));
}

TEST(Variant, BodyOrderIgnored) {
  EXPECT_TRUE(variant_equal(parse_clause("p(X) :- a(X,Y), b(Y)."),
                            parse_clause("p(X) :- b(Y), a(X,Y).")));
}

TEST(Variant, MultiplicityMatters) {
  EXPECT_FALSE(variant_equal(parse_clause("p(X) :- a(X), a(X), b(X)."),
                             parse_clause("p(X) :- a(X), b(X), b(X).")));
}

TEST(Connected, Disconnected) { EXPECT_FALSE(connected(parse_clause("h(X,Y) :- p(X,Y), q(Z)."))); }
TEST(Connected, Chain) { EXPECT_TRUE(connected(parse_clause("h(X,Y) :- p(X,Z), q(Z,Y)."))); }
TEST(Connected, SingleLiteral) { EXPECT_TRUE(connected(parse_clause("h(X) :- p(X)."))); }

TEST(ConnectedPowerSet, DropsDisconnectedPair) {
  auto s = connected_power_set(parse_clause("h(X,Y) :- a(X,Y), b(Y,Z), c(Z)."));
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(std::count(s.begin(), s.end(), LiteralSubset{0, 2}), 0);
}

TEST(ConnectedPowerSet, SingleLiteral) {
  EXPECT_EQ(connected_power_set(parse_clause("h(X) :- p(X).")).size(), 1u);
}

TEST(ConnectedPowerSet, DisjointLiterals) {
  Clause c = parse_clause("h :- a(X), b(Y), c(Z).");
  auto got = connected_power_set(c);
  auto want = oracle::connected_subsets(c.body);
  ASSERT_EQ(want.size(), 3u);
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(ConnectedPowerSet, CapThrows) {
  std::string body;
  for (int k = 0; k <= static_cast<int>(kFullPowerSetCap); ++k)
    body += (k ? ", " : "") + std::string("a(X)");
  EXPECT_THROW(connected_power_set(parse_clause("h(X) :- " + body + ".")), LimitError);
}

TEST(Matching, EmbeddingsOfSubBody) {
  Clause c = parse_clause("p(X) :- a(X,Y), b(Y), a(X,Z), b(Z).");
  Clause s = parse_clause("s(U) :- a(U,V), b(V).");
  std::size_t n = 0;
  Renaming r;
  for_each_embedding(s.body, c.body, r, [&](const std::vector<std::size_t>&, const Renaming&) {
    ++n;
    return true;
  });
  EXPECT_EQ(n, 2u);
}

// Random clauses over a small alphabet so that variants actually occur.
Clause random_clause(std::mt19937_64& rng) {
  const char* vars[] = {"X", "Y", "Z", "W"};
  const char* preds[] = {"a", "b"};
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::string s = std::string("h(") + vars[pick(4)] + ") :- ";
  int len = 1 + pick(3);
  for (int k = 0; k < len; ++k)
    s += std::string(k ? ", " : "") + preds[pick(2)] + "(" + vars[pick(4)] + "," + vars[pick(4)] + ")";
  return parse_clause(s);
}

TEST(Property, VariantEqualAgreesWithBijectionOracle) {
  std::mt19937_64 rng(11);
  std::size_t positives = 0;
  for (int k = 0; k < 3000; ++k) {
    Clause a = random_clause(rng), b = random_clause(rng);
    bool want = oracle::variant_equal(a, b);
    positives += want;
    ASSERT_EQ(variant_equal(a, b), want) << render_clause(a) << " vs " << render_clause(b);
    if (want) ASSERT_EQ(variant_hash(a), variant_hash(b));
  }
  EXPECT_GT(positives, 10u);
}

TEST(Property, VariantEqualIsEquivalence) {
  std::mt19937_64 rng(5);
  std::vector<Clause> cs;
  for (int k = 0; k < 120; ++k) cs.push_back(random_clause(rng));
  for (const Clause& a : cs) {
    ASSERT_TRUE(variant_equal(a, a));
    for (const Clause& b : cs) {
      bool ab = variant_equal(a, b);
      ASSERT_EQ(ab, variant_equal(b, a));
      if (!ab) continue;
      for (const Clause& c : cs)
        if (variant_equal(b, c)) ASSERT_TRUE(variant_equal(a, c));
    }
  }
}

TEST(Property, ParseRenderRoundTrip) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    Program p = oracle::random_program(rng);
    Program q = parse_program(render_program(p));
    ASSERT_EQ(p.clauses.size(), q.clauses.size());
    for (std::size_t c = 0; c < p.clauses.size(); ++c)
      ASSERT_TRUE(variant_equal(p.clauses[c], q.clauses[c]));
    ASSERT_EQ(p.registry, q.registry);
  }
}

TEST(Property, ConnectedPowerSetMatchesOracle) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 500; ++k) {
    Clause c = random_clause(rng);
    auto got = connected_power_set(c);
    auto want = oracle::connected_subsets(c.body);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    ASSERT_EQ(got, want) << render_clause(c);
    ASSERT_LE(got.size(), (std::size_t{1} << c.body.size()) - 1);
    for (const auto& s : got) ASSERT_TRUE(connected(select(c.body, s)));
  }
}

}  // namespace
}  // namespace kbr
