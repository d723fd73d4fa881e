#include <gtest/gtest.h>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/interp.hpp"
#include "phl/preterm.hpp"
#include "phl/simplify.hpp"

using namespace phl;
using namespace phl::test;

namespace {

DistFamily family_x() { return DistFamily(StateWindow({"X"}, {-8, 8}), 0); }

PtOptions small_opts() {
  PtOptions o;
  o.int_window = {-2, 2};
  o.quant_window = {-2, 2};
  return o;
}

}  // namespace

TEST(Pt, Assignment) { EXPECT_EQ(pt(cmd("X := Y + 1"), real("P(X = 2)")).expr, real("P(Y + 1 = 2)")); }

TEST(Pt, DivergentLoopIsZero) {
  const auto r = pt(cmd(kDiverge), real("P(true)"));
  const DistFamily fam = family_x();
  for (const auto& mu : fam.members()) EXPECT_EQ(eval_real(r.expr, mu), Rational(0));
  EXPECT_EQ(r.expr, real("0"));
}

TEST(Pt, CStarIsTwoThirdsOfMass) {
  const auto r = pt(cmd(kCStar), real("P(true)"));
  EXPECT_EQ(r.expr, real("2/3 * P(true)"));
  const DistFamily fam = family_x();
  for (const auto& mu : fam.members()) {
    EXPECT_EQ(eval_real(r.expr, mu), q("2/3") * mu.total_mass());
    EXPECT_EQ(pt_semantic_oracle(cmd(kCStar), real("P(true)"), mu), q("2/3") * mu.total_mass());
  }
}

TEST(Pt, OracleBasics) {
  const auto mu = half_half();
  EXPECT_EQ(pt_semantic_oracle(cmd("skip"), real("P(X = 0) + 1"), mu), q("3/2"));
  EXPECT_EQ(pt_semantic_oracle(cmd(kDiverge), real("P(true)"), mu), Rational(0));
}

TEST(Pt, GeometricLoopIsTruncated) {
  const auto r = pt(cmd(kGeometric), real("P(Y = 2)"), small_opts());
  ASSERT_EQ(r.loops.size(), 1u);
  EXPECT_FALSE(r.exact());
  EXPECT_EQ(eval_real(r.expr, SubDistribution::point(st("X=0, Y=0"))), q("1/4"));
}

TEST(Pt, ExhaustiveLoopIsExact) {
  const auto r = pt(cmd("while X < 2 do { X := X + 1 }"), real("P(X = 2)"), small_opts());
  ASSERT_EQ(r.loops.size(), 1u);
  EXPECT_TRUE(r.loops[0].exhaustive);
  for (long x = -2; x <= 2; ++x) EXPECT_EQ(eval_real(r.expr, SubDistribution::point(State{{"X", x}})), Rational(1));
}

TEST(Pt, TruncationIsMonotoneInDepth) {
  const Command c = cmd("while X = 0 do { X :=$ {1/2:0, 1/2:1}; Y := Y + 1 }");
  const auto mu = SubDistribution::point(st("X=0, Y=0"));
  Rational last(-1);
  for (int d = 1; d <= 6; ++d) {
    PtOptions o = small_opts();
    o.unroll = 2;
    o.depth = d;
    const Rational v = eval_real(pt(c, real("P(X = 1)"), o).expr, mu);
    EXPECT_GE(v, last);
    last = v;
  }
}

TEST(Pt, PasFormsAgree) {
  GenOptions go;
  go.window = {-3, 3};
  Generator g(211, go);
  for (int i = 0; i < 120; ++i) {
    const DistSpec d = g.dist_spec(1 + g.pick(6));
    const Command c = Command::passign("X", d);
    const Formula phi = g.formula(2);
    PtOptions o;
    o.pas = PasForm::subset_sum;
    const RealExpr subset = pt(c, RealExpr::prob(phi), o).expr;
    RealExpr linear = RealExpr::constant(0);
    for (const auto& e : d.entries()) {
      linear = RealExpr::binary(ArithOp::add, linear,
                                RealExpr::binary(ArithOp::mul, RealExpr::constant(e.weight),
                                                 RealExpr::prob(subst(phi, "X", Expr::constant(e.value)))));
    }
    for (int k = 0; k < 3; ++k) {
      const auto mu = g.distribution();
      ASSERT_EQ(eval_real(subset, mu, {}, {-3, 3}), eval_real(linear, mu, {}, {-3, 3})) << to_string(phi);
    }
  }
}

TEST(Pt, LargeOutcomeSetsFallBackToLinearForm) {
  std::vector<DistSpec::Entry> entries;
  for (int k = 0; k < 13; ++k) entries.push_back({Rational(1, 13), k});
  const auto r = pt(Command::passign("X", DistSpec(entries)), real("P(X < 5)"));
  EXPECT_EQ(r.linear_fallbacks, 1);
  EXPECT_EQ(eval_real(r.expr, SubDistribution::point(st("X=0"))), q("5/13"));
}

TEST(Pt, CharacterizationOnExactExpansions) {
  Generator g(223);
  int checked = 0;
  for (int n = 0; n < 150; ++n) {
    const Command c = g.command(3);
    const RealExpr r = g.real_expr(2);
    const auto res = pt(c, r, small_opts());
    if (!res.exact()) continue;
    for (int k = 0; k < 4; ++k) {
      const auto mu = g.distribution();
      ASSERT_EQ(eval_real(res.expr, mu), pt_semantic_oracle(c, r, mu)) << to_string(c) << " / " << to_string(r);
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(Pt, PublishedSeriesDiffersOnSubUnitMass) {
  // Loop that needs one iteration from X = 0 and none from X = 1.
  const Command c = cmd("while X = 0 do { X := 1 }");
  PtOptions pub = small_opts();
  pub.series = WhileSeriesForm::as_published;
  const auto mu = SubDistribution({{st("X=0"), q("1/2")}});
  EXPECT_EQ(eval_real(pt(c, real("P(X = 1)"), small_opts()).expr, mu), q("1/2"));
  EXPECT_NE(eval_real(pt(c, real("P(X = 1)"), pub).expr, mu), q("1/2"));
}

TEST(Wpp, WorkedExamples) {
  const auto w = wpp(cmd(kDiverge), pf("P(true) = 0"));
  const DistFamily fam = family_x();
  for (const auto& mu : fam.members()) EXPECT_TRUE(sat_prob(w.formula, mu));
  EXPECT_EQ(wpp(cmd(kCStar), pf("P(true) <= 2/3")).formula, pf("2/3 * P(true) <= 2/3"));
  EXPECT_EQ(wpp(cmd("skip"), pf("P(X = 1) > 1/2")).formula, pf("P(X = 1) > 1/2"));
}

TEST(Wpp, BiconditionalOnExactExpansions) {
  Generator g(227);
  Config cfg;
  int checked = 0;
  for (int n = 0; n < 100; ++n) {
    const Command c = g.command(2);
    const ProbFormula f = g.prob_formula(2);
    const auto w = wpp(c, f, small_opts());
    if (!w.exact()) continue;
    for (int k = 0; k < 4; ++k) {
      const auto mu = g.distribution();
      const auto out = exec(c, mu);
      ASSERT_TRUE(out.output_final());
      ASSERT_EQ(sat_prob(w.formula, mu), sat_prob(f, out.output)) << to_string(c) << " / " << to_string(f);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(CheckTripleProb, Examples) {
  const Config cfg;
  const DistFamily fam = family_x();
  EXPECT_EQ(check_triple_prob(pf("true"), cmd(kDiverge), pf("P(true) = 0"), fam, cfg).kind, Verdict::Kind::holds);
  EXPECT_EQ(check_triple_prob(pf("true"), cmd(kCStar), pf("P(true) <= 2/3"), fam, cfg).kind, Verdict::Kind::holds);
  EXPECT_TRUE(check_triple_prob(pf("true"), cmd("X :=$ {1/2:0, 1/2:1}"), pf("P(X = 0) = 1/2 * P(true)"), fam, cfg).ok());
  // Without scaling by the mass the postcondition fails on sub-distributions.
  const auto literal = check_triple_prob(pf("true"), cmd("X :=$ {1/2:0, 1/2:1}"), pf("P(X = 0) = 1/2"), fam, cfg);
  ASSERT_EQ(literal.kind, Verdict::Kind::counterexample);
  EXPECT_LT(literal.dist->total_mass(), Rational(1));
  const auto v = check_triple_prob(pf("true"), cmd(kCStar), pf("P(true) <= 1/2"), fam, cfg);
  EXPECT_EQ(v.kind, Verdict::Kind::counterexample);
  EXPECT_EQ(v.scope, fam.scope());
}

TEST(Pt, NestedDivergentLoopsStayWithinBudget) {
  const Command c = cmd("while 2 >= Y + -1 -> X + 1 >= 2 * Y do { while Y + -1 > 0 || Y = 2 do { X := 2 } }");
  PtOptions o = small_opts();
  o.max_expansions = 4;
  const auto r = pt(c, real("P(!(X >= 0)) * P(X + X < Y)"), o);
  EXPECT_FALSE(r.exact());
  EXPECT_TRUE(std::any_of(r.loops.begin(), r.loops.end(), [](const WhileExpansion& l) { return l.budget_limited; }));
  EXPECT_EQ(std::count_if(r.loops.begin(), r.loops.end(), [](const WhileExpansion& l) { return !l.budget_limited; }), 4);
}
