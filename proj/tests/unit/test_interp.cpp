#include <gtest/gtest.h>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/interp.hpp"
#include "phl/logic.hpp"
#include "phl/wp.hpp"

using namespace phl;
using namespace phl::test;

TEST(Eval, Arithmetic) {
  EXPECT_EQ(eval_arith(parse_arith("X + 1"), st("X=1")), Integer(2));
  EXPECT_EQ(eval_arith(parse_arith("7"), st("Y=4")), Integer(7));
  Interpretation i;
  i.logical["x"] = 3;
  EXPECT_EQ(eval_arith(Expr::binary(ArithOp::add, Expr::log_var("x"), Expr::prog_var("X")), st("X=1"), i), Integer(4));
  EXPECT_THROW(eval_arith(parse_arith("Z"), st("X=1")), UnboundVariable);
}

TEST(Eval, Formulas) {
  Interpretation i;
  i.logical["x"] = 3;
  EXPECT_TRUE(sat_det(fml("forall x. (x > 0 -> x + X > X)"), st("X=1"), i));
  EXPECT_TRUE(sat_det(fml("true"), st("X=1")));
  EXPECT_TRUE(sat_det(fml("X + 2 <= 3 && X + Y = 3"), st("X=1, Y=2")));
  EXPECT_FALSE(sat_det(fml("forall x. x < X"), st("X=1"), {}, {-2, 2}));
}

TEST(Eval, PossibilitySemantics) {
  EXPECT_TRUE(sat_det_dist(fml("false"), SubDistribution::zero()));
  EXPECT_TRUE(sat_det_dist(fml("X >= 0"), half_half()));
  EXPECT_FALSE(sat_det_dist(fml("X = 0"), half_half()));
}

TEST(Restrict, Guards) {
  const auto mu = half_half();
  EXPECT_EQ(restrict(mu, Formula::truth()), mu);
  EXPECT_EQ(restrict(mu, Formula::falsity()), SubDistribution::zero());
  EXPECT_EQ(restrict(mu, fml("X = 0")), SubDistribution({{st("X=0"), q("1/2")}}));
}

TEST(Exec, ProbabilisticAssignment) {
  const auto r = exec(cmd("X :=$ {1/2:0, 1/2:1}"), SubDistribution::point(st("X=5")));
  EXPECT_EQ(r.output, half_half());
  EXPECT_TRUE(r.exact);
}

TEST(Exec, DivergentLoopYieldsZero) {
  const auto mu = SubDistribution({{st("X=2"), q("1/3")}, {st("X=0"), q("1/6")}});
  const auto r = exec(cmd(kDiverge), mu, 10);
  EXPECT_TRUE(r.output.empty());
  EXPECT_EQ(r.residual_mass, q("1/2"));
  EXPECT_FALSE(r.exact);
  EXPECT_TRUE(r.stationary);
}

TEST(Exec, GeometricLoop) {
  const auto r = exec(cmd(kGeometric), SubDistribution::point(st("X=0, Y=0")), 20);
  // Independent computation of 2^-i.
  Rational p(1);
  for (int i = 1; i <= 20; ++i) {
    p = p / Rational(2);
    EXPECT_EQ(r.output(State{{"X", 1}, {"Y", i}}), p) << i;
  }
  EXPECT_EQ(r.output.support_size(), 20u);
  EXPECT_EQ(r.residual_mass, p);
  EXPECT_EQ(r.iterations_used, 20);
  EXPECT_FALSE(r.output_final());
}

TEST(Exec, StraddlingConditionalRunsBothBranches) {
  const auto r = exec(cmd("if X = 0 then { Y := 1 } else { Y := 2 }"),
                      SubDistribution({{st("X=0, Y=0"), q("1/4")}, {st("X=1, Y=0"), q("1/2")}}));
  EXPECT_EQ(r.output, SubDistribution({{st("X=0, Y=1"), q("1/4")}, {st("X=1, Y=2"), q("1/2")}}));
}

TEST(Exec, LoopFreeCommandsConserveMass) {
  Generator g(17);
  for (int i = 0; i < 200; ++i) {
    const Command c = g.loop_free(3);
    const auto mu = g.distribution();
    EXPECT_EQ(exec(c, mu).output.total_mass(), mu.total_mass()) << to_string(c);
  }
}

TEST(Exec, OutputPlusResidualIsInputMass) {
  Generator g(18);
  for (int i = 0; i < 150; ++i) {
    const Command c = g.command(3);
    const auto mu = g.distribution();
    const auto r = exec(c, mu, 16);
    EXPECT_EQ(r.output.total_mass() + r.residual_mass, mu.total_mass()) << to_string(c);
  }
}

TEST(Exec, LoopAccumulationIsMonotone) {
  const Command c = cmd(kGeometric);
  const auto mu = SubDistribution::point(st("X=0, Y=0"));
  Rational last_out(-1);
  Rational last_res(2);
  for (long bound = 0; bound <= 12; ++bound) {
    const auto r = exec(c, mu, bound);
    EXPECT_GE(r.output.total_mass(), last_out);
    EXPECT_LE(r.residual_mass, last_res);
    last_out = r.output.total_mass();
    last_res = r.residual_mass;
  }
}

TEST(Exec, LinearOnLoopFreeCommands) {
  Generator g(19);
  for (int i = 0; i < 150; ++i) {
    const Command c = g.loop_free(3);
    const auto m1 = g.distribution();
    const auto m2 = g.distribution();
    const Rational a(Integer(g.between(0, 4)), Integer(8));
    const Rational b(Integer(g.between(0, 4)), Integer(8));
    SubDistribution mix = m1.scaled(a);
    mix.add(m2.scaled(b));
    SubDistribution expected = exec(c, m1).output.scaled(a);
    expected.add(exec(c, m2).output.scaled(b));
    EXPECT_EQ(exec(c, mix).output, expected);
  }
}

TEST(Exec, KeyLemmaOnSmallLoops) {
  GenOptions o;
  o.window = {-2, 2};
  Generator g(23, o);
  const StateWindow w({"X", "Y"}, {-2, 2});
  int checked = 0;
  for (int n = 0; n < 40; ++n) {
    const Command loop = g.while_loop(2);
    const auto& wl = *loop.as<While>();
    const Command step = Command::if_then_else(wl.guard, wl.body, Command::skip());
    std::vector<Formula> exits;  // wp(C^i, !B)
    for (int i = 0; i <= 6; ++i) exits.push_back(wp(wp_iterate_cmd(wl.body, i), Formula::negation(wl.guard)).formula);
    for (const auto& s : w.states()) {
      for (int i = 0; i <= 6; ++i) {
        bool member = sat_det(exits[i], s);
        for (int j = 0; j < i && member; ++j) member = !sat_det(exits[j], s);
        if (!member) continue;
        const auto mu = SubDistribution::point(s);
        EXPECT_EQ(exec(loop, mu).output, exec(wp_iterate_cmd(step, i), mu).output) << to_string(loop);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}
