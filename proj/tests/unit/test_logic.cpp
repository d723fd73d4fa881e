#include <gtest/gtest.h>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/interp.hpp"
#include "phl/logic.hpp"
#include "phl/preterm.hpp"
#include "phl/wp.hpp"

using namespace phl;
using namespace phl::test;

TEST(EvalReal, Probabilities) {
  const auto mu = SubDistribution({{st("X=0"), q("1/3")}, {st("X=4"), q("1/6")}});
  EXPECT_EQ(eval_real(real("P(true)"), mu), mu.total_mass());
  EXPECT_EQ(eval_real(real("P(X = 0)"), half_half()), q("1/2"));
  EXPECT_EQ(eval_real(real("P(true)"), exec(cmd(kDiverge), SubDistribution::point(st("X=1"))).output), Rational(0));
  Interpretation i;
  i.real["a"] = q("2/3");
  EXPECT_EQ(eval_real(real("@a * P(X = 4) + 1"), mu, i), q("10/9"));
}

TEST(SatProb, Examples) {
  EXPECT_TRUE(sat_prob(pf("P(true) = 0"), SubDistribution::zero()));
  EXPECT_FALSE(sat_prob(pf("P(X > 0) > 1/2"), half_half()));
  const ProbFormula phi = pf("P(X = 0) >= 1/3");
  EXPECT_FALSE(sat_prob(ProbFormula::conjunction(phi, ProbFormula::negation(phi)), half_half()));
}

TEST(Validity, Deterministic) {
  const StateWindow w({"X"}, {-8, 8});
  EXPECT_TRUE(check_valid_det(fml("true -> true"), w, {}).ok());
  EXPECT_TRUE(check_valid_det(fml("X = 0 -> X >= 0"), w, {}).ok());
  const auto v = check_valid_det(fml("X >= 0"), StateWindow({"X"}, {-2, 2}), {});
  ASSERT_EQ(v.kind, Verdict::Kind::counterexample);
  EXPECT_TRUE(sat_det(fml("X < 0"), *v.state));
  EXPECT_EQ(v.scope, "on window [-2,2]^{X}");
}

TEST(Validity, Probabilistic) {
  const Config cfg;
  const DistFamily fam(StateWindow({"X"}, cfg.int_window), 0);
  EXPECT_TRUE(check_valid_prob(pf("true -> 2/3 * P(true) <= 2/3"), fam, cfg).ok());
  const auto v = check_valid_prob(pf("P(true) = 1"), fam, cfg);
  ASSERT_EQ(v.kind, Verdict::Kind::counterexample);
  EXPECT_LT(v.dist->total_mass(), Rational(1));
  EXPECT_TRUE(check_valid_prob(pf("0 = 0"), fam, cfg).ok());
}

TEST(Family, Composition) {
  const StateWindow w({"X"}, {-1, 1});
  const DistFamily fam(w, 0);
  const auto& m = fam.members();
  for (std::size_t i = 0; i < w.states().size(); ++i) EXPECT_EQ(m[i], SubDistribution::point(w.states()[i]));
  EXPECT_EQ(fam.size(), 3u + 32u + 2u);
  EXPECT_NE(std::find(m.begin(), m.end(), SubDistribution::zero()), m.end());
  EXPECT_TRUE(std::any_of(m.begin(), m.end(), [](const SubDistribution& d) { return d.total_mass() == q("1/2"); }));
  for (const auto& d : m) {
    EXPECT_LE(d.support_size(), 4u);
    for (const auto& s : d.support()) EXPECT_TRUE(w.contains(s));
  }
  EXPECT_EQ(DistFamily(w, 0).members(), m);
  EXPECT_NE(DistFamily(w, 1).members(), m);
  EXPECT_EQ(fam.scope(), "on family seed=0, size=37");
}

TEST(EvalReal, ProbabilityBoundsAndComplement) {
  Generator g(31);
  for (int i = 0; i < 300; ++i) {
    const Formula phi = g.guard(2);
    const auto mu = g.distribution();
    const Rational p = eval_real(RealExpr::prob(phi), mu);
    EXPECT_GE(p, Rational(0));
    EXPECT_LE(p, mu.total_mass());
    EXPECT_EQ(p + eval_real(RealExpr::prob(Formula::negation(phi)), mu), mu.total_mass());
  }
}

TEST(EvalReal, MonotoneUnderEntailment) {
  Generator g(37);
  const StateWindow w({"X", "Y"}, {-2, 2});
  int compared = 0;
  for (int i = 0; i < 400; ++i) {
    const Formula a = g.guard(2);
    const Formula b = g.guard(2);
    if (!check_valid_det(Formula::implication(a, b), w, {}).ok()) continue;
    const auto mu = g.distribution();
    EXPECT_LE(eval_real(RealExpr::prob(a), mu), eval_real(RealExpr::prob(b), mu));
    ++compared;
  }
  EXPECT_GT(compared, 20);
}

TEST(CondTerm, Clauses) {
  EXPECT_EQ(cond_term(real("3/4"), fml("X > 0")), real("3/4"));
  EXPECT_EQ(cond_term(real("P(X = 1)"), fml("X > 0")), real("P(X = 1 && X > 0)"));
}

TEST(CondTerm, AgreesWithRestriction) {
  Generator g(41, GenOptions{.real_vars = true});
  const auto interps = enumerate_interpretations({}, {"a", "b"}, {}, {q("1/2"), q("-1")});
  for (int i = 0; i < 300; ++i) {
    const RealExpr r = g.real_expr(3);
    const Formula b = g.guard(2);
    const auto mu = g.distribution();
    for (const auto& in : interps) {
      ASSERT_EQ(eval_real(cond_term(r, b), mu, in), eval_real(r, restrict(mu, b), in)) << to_string(r);
    }
  }
}

TEST(Distributions, JsonInput) {
  const auto one = parse_distributions_json(R"([{"state": {"X": 0}, "prob": "1/2"}, {"state": {"X": 1}, "prob": "1/4"}])");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].total_mass(), q("3/4"));
  const auto two = parse_distributions_json(R"([[{"state": {"X": 0}, "prob": "1"}], []])");
  EXPECT_EQ(two.size(), 2u);
  EXPECT_THROW(parse_distributions_json(R"([{"state": {"X": 0}, "prob": "0.5"}])"), Error);
  EXPECT_THROW(parse_distributions_json(R"([{"state": {"X": 0}, "prob": "3/2"}])"), std::exception);
}
