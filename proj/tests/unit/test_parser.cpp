#include <gtest/gtest.h>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/interp.hpp"

using namespace phl;
using namespace phl::test;

TEST(Parser, Commands) {
  EXPECT_TRUE(cmd("skip").is<Skip>());

  const Command pas = cmd("X :=$ {1/2:0, 1/2:1}");
  ASSERT_TRUE(pas.is<PAssign>());
  const auto& a = *pas.as<PAssign>();
  EXPECT_EQ(a.var, "X");
  EXPECT_EQ(a.dist, DistSpec({{q("1/2"), 0}, {q("1/2"), 1}}));

  const Command loop = cmd("while X=0 do { X :=$ {1/2:0,1/2:1}; Y := Y+1 }");
  ASSERT_TRUE(loop.is<While>());
  const auto& w = *loop.as<While>();
  EXPECT_EQ(w.guard, fml("X = 0"));
  const Command expected_body = Command::seq(pas, Command::assign("Y", parse_arith("Y + 1")));
  EXPECT_EQ(w.body, expected_body);
}

TEST(Parser, ProbabilisticFormula) {
  const ProbFormula f = pf("P(X>0) > 1/2 && !(P(X>1) < P(X>0))");
  const ProbFormula expected = ProbFormula::conjunction(
      ProbFormula::rel(RelOp::gt, RealExpr::prob(fml("X > 0")), RealExpr::constant(q("1/2"))),
      ProbFormula::negation(
          ProbFormula::rel(RelOp::lt, RealExpr::prob(fml("X > 1")), RealExpr::prob(fml("X > 0")))));
  EXPECT_EQ(f, expected);
}

TEST(Parser, Quantifier) {
  const Formula f = fml("forall x. (x>0 -> x+X > X)");
  ASSERT_TRUE(f.is<Forall>());
  EXPECT_EQ(f.as<Forall>()->var, "x");
  EXPECT_TRUE(f.as<Forall>()->body.is<Implies>());
}

TEST(Parser, TripleFlavor) {
  const auto t = parse_triple("{ true } while true do { skip } { P(true) = 0 }");
  EXPECT_EQ(t.flavor, Flavor::probabilistic);
  EXPECT_TRUE(t.prob_pre() == ProbFormula::constant(true));
  const auto d = parse_triple("{X = 0} X := 1 {X = 1}");
  EXPECT_EQ(d.flavor, Flavor::deterministic);
}

TEST(Parser, PrecedenceAndAssociativity) {
  EXPECT_EQ(fml("!X = 0 && Y = 1 || Y = 2 -> X = 1 -> Y = 0"),
            fml("(((!(X = 0)) && Y = 1) || Y = 2) -> (X = 1 -> Y = 0)"));
  EXPECT_EQ(parse_arith("1 + 2 * X - Y"), parse_arith("(1 + (2 * X)) - Y"));
}

TEST(Parser, RejectsDecimals) { EXPECT_THROW(cmd("X :=$ {0.5:0, 0.5:1}"), ParseError); }

TEST(Parser, ReportsPositions) {
  try {
    cmd("X := 1;\n  Y := ");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(Parser, RejectsMixedFlavors) { EXPECT_THROW(parse_triple("{X = 0} skip {P(X = 0) = 1 && X = 0}"), ParseError); }

TEST(Parser, Comments) { EXPECT_EQ(cmd("X := 1 # set X\n; skip"), cmd("X := 1; skip")); }

TEST(Parser, ChoiceDesugarsToFreshVariable) {
  const Command c = cmd("X := 1 [1/3] X := 2");
  NameSet vars;
  collect_prog_vars(c, vars);
  EXPECT_TRUE(vars.count("_F0") == 1);
  const auto out = exec(c, SubDistribution::point(st("X=0"))).output.without("_F0");
  EXPECT_EQ(out, SubDistribution({{st("X=1"), q("1/3")}, {st("X=2"), q("2/3")}}));
}

TEST(Parser, ChoiceMatchesConvexCombination) {
  Generator g(21, GenOptions{.vars = {"X", "Y"}, .window = {-2, 2}});
  for (int i = 0; i < 100; ++i) {
    const Command c1 = g.loop_free(2);
    const Command c2 = g.loop_free(2);
    const Rational p(Integer(g.between(1, 4)), Integer(5));
    const Command choice = cmd("(" + to_string(c1) + ") [" + p.to_string() + "] (" + to_string(c2) + ")");
    const auto mu = g.distribution();
    SubDistribution expected = exec(c1, mu).output.scaled(p);
    expected.add(exec(c2, mu).output.scaled(Rational(1) - p));
    EXPECT_EQ(exec(choice, mu).output.without("_F0"), expected);
  }
}

TEST(Parser, RoundTripsGeneratedTrees) {
  Generator g(1, GenOptions{.real_vars = true});
  for (int i = 0; i < 300; ++i) {
    const Formula f = g.formula(4);
    ASSERT_EQ(parse_det_formula(to_string(f)), f) << to_string(f);
    const RealExpr r = g.real_expr(3);
    ASSERT_EQ(parse_real_expr(to_string(r)), r) << to_string(r);
    const ProbFormula p = g.prob_formula(3);
    ASSERT_EQ(parse_prob_formula(to_string(p)), p) << to_string(p);
    const Command c = g.command(4);
    ASSERT_EQ(parse_command(to_string(c)), c) << to_string(c);
  }
}

TEST(Parser, States) {
  EXPECT_EQ(st("X=0, Y=-1"), (State{{"X", 0}, {"Y", -1}}));
  EXPECT_THROW(st("X=0, X=1"), Error);
}
