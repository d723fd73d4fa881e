#include <gtest/gtest.h>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/interp.hpp"
#include "phl/simplify.hpp"
#include "phl/wp.hpp"

using namespace phl;
using namespace phl::test;

namespace {

WpOptions small_opts() {
  WpOptions o;
  o.int_window = {-2, 2};
  o.quant_window = {-2, 2};
  return o;
}

}  // namespace

TEST(Wp, Skip) { EXPECT_EQ(wp(cmd("skip"), fml("X = 3")).formula, fml("X = 3")); }

TEST(Wp, ProbabilisticAssignmentIsConjunction) {
  const Formula phi = fml("X + Y > 0");
  const Formula expected = mk_and_all({subst_simplify(phi, "X", Expr::constant(0)),
                                       subst_simplify(phi, "X", Expr::constant(1))});
  EXPECT_EQ(wp(cmd("X :=$ {1/2:0, 1/2:1}"), phi).formula, expected);
}

TEST(Wp, LoopFixpoint) {
  const auto r = wp(cmd("while X = 0 do { X := 1 }"), fml("X = 1"));
  ASSERT_EQ(r.loops.size(), 1u);
  EXPECT_TRUE(r.loops[0].converged);
  EXPECT_EQ(r.loops[0].fixpoint_index, 2);
  EXPECT_TRUE(r.loops[0].window_closed);
  const StateWindow w({"X"}, {-8, 8});
  EXPECT_TRUE(window_equivalent(r.formula, fml("X = 0 || X = 1"), w, {}));
  for (const auto& s : w.states()) {
    EXPECT_EQ(sat_det(r.formula, s), sat_det_dist(fml("X = 1"), exec(cmd("while X = 0 do { X := 1 }"),
                                                                        SubDistribution::point(s)).output));
  }
}

TEST(Wp, Iterate) {
  const Command c = cmd("X := X + 1");
  EXPECT_EQ(wp_iterate_cmd(c, 0), Command::skip());
  EXPECT_EQ(wp_iterate_cmd(c, 1), c);
  EXPECT_EQ(wp_iterate_cmd(c, 2), Command::seq(c, c));
}

TEST(Wp, DivergenceSatisfiesEverything) {
  const Config cfg;
  EXPECT_EQ(check_triple_det(fml("true"), cmd(kDiverge), fml("false"), cfg).kind, Verdict::Kind::holds);
  EXPECT_EQ(wp(cmd(kDiverge), fml("false")).formula, Formula::truth());
}

TEST(CheckTriple, Examples) {
  const Config cfg;
  EXPECT_EQ(check_triple_det(fml("X = 0"), cmd("X := 1"), fml("X = 1"), cfg).kind, Verdict::Kind::holds);
  EXPECT_TRUE(check_triple_det(fml("true"), cmd("X :=$ {1/2:0, 1/2:1}"), fml("X = 0 || X = 1"), cfg).ok());
  const auto v = check_triple_det(fml("true"), cmd("X :=$ {1/2:0, 1/2:1}"), fml("X = 0"), cfg);
  EXPECT_EQ(v.kind, Verdict::Kind::counterexample);
  EXPECT_TRUE(v.state.has_value());
  const auto g = check_triple_det(fml("X = 0"), cmd(kGeometric), fml("X = 1"), StateWindow({"X", "Y"}, {-2, 2}), {}, 8);
  EXPECT_EQ(g.kind, Verdict::Kind::holds_up_to_residual);
}

TEST(Wp, CharacterizationOnClosedPrograms) {
  Generator g(101);
  const StateWindow w({"X", "Y"}, {-2, 2});
  int checked = 0;
  for (int n = 0; n < 120; ++n) {
    const Command c = g.command(3);
    const Formula phi = g.formula(2);
    const auto r = wp(c, phi, small_opts());
    if (!r.converged()) continue;
    for (const auto& s : w.states()) {
      const auto out = exec(c, SubDistribution::point(s));
      ASSERT_EQ(sat_det(r.formula, s, {}, {-2, 2}), sat_det_dist(phi, out.output, {}, {-2, 2}))
          << to_string(c) << " / " << to_string(phi) << " at " << s.to_string();
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Wp, Weakestness) {
  Generator g(103);
  const StateWindow w({"X", "Y"}, {-2, 2});
  int checked = 0;
  for (int n = 0; n < 300; ++n) {
    const Command c = g.command(2);
    const Formula phi = g.formula(2);
    const Formula psi = g.formula(2);
    if (!check_triple_det(phi, c, psi, w, {-2, 2}, 64).ok()) continue;
    const auto r = wp(c, psi, small_opts());
    if (!r.converged()) continue;
    EXPECT_TRUE(check_valid_det(Formula::implication(phi, r.formula), w, {-2, 2}).ok()) << to_string(c);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Wp, LoopRuleSoundness) {
  Generator g(107);
  const StateWindow w({"X", "Y"}, {-2, 2});
  int checked = 0;
  for (int n = 0; n < 600 && checked < 60; ++n) {
    const Command loop = g.while_loop(2);
    const auto& l = *loop.as<While>();
    const Formula inv = g.formula(2);
    if (!check_triple_det(Formula::conjunction(inv, l.guard), l.body, inv, w, {-2, 2}, 64).ok()) continue;
    EXPECT_TRUE(check_triple_det(inv, loop, Formula::conjunction(inv, Formula::negation(l.guard)), w, {-2, 2}, 64).ok());
    ++checked;
  }
  EXPECT_GE(checked, 60);
}
