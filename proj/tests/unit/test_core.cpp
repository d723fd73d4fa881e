#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/interp.hpp"
#include "phl/logic.hpp"
#include "phl/simplify.hpp"

using namespace phl;
using namespace phl::test;

TEST(Numeric, ParsesAndPrintsFractions) {
  EXPECT_EQ(q("2/4").to_string(), "1/2");
  EXPECT_EQ(q("-3").to_string(), "-3");
  EXPECT_EQ(q("6/3").to_string(), "2");
  EXPECT_THROW(Rational::parse("0.5"), std::exception);
  EXPECT_THROW(Rational::parse("1/0"), std::exception);
}

TEST(Numeric, IntegersDoNotOverflow) {
  Integer big = Integer::parse("9223372036854775807");
  big = big + Integer(1);
  EXPECT_EQ(big.to_string(), "9223372036854775808");
}

TEST(Numeric, AdditionRoundTripsOnRandomRationals) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Rational a(Integer(static_cast<long>(rng() % 2001) - 1000), Integer(static_cast<long>(rng() % 999) + 1));
    const Rational b(Integer(static_cast<long>(rng() % 2001) - 1000), Integer(static_cast<long>(rng() % 999) + 1));
    EXPECT_EQ((a + b) - b, a);
  }
}

TEST(Subst, ReplacesLeaves) {
  EXPECT_EQ(subst(fml("X = 1"), "X", parse_arith("X + 1")), fml("X + 1 = 1"));
}

TEST(Subst, PassesThroughQuantifiers) {
  EXPECT_EQ(subst(fml("forall x. x > X"), "X", parse_arith("0")), fml("forall x. x > 0"));
}

TEST(Subst, IdentityWhenVariableAbsent) {
  const Formula f = fml("X > 2 && forall x. x <= X");
  EXPECT_EQ(subst(f, "Y", parse_arith("Y + 3")), f);
}

TEST(Subst, ConstantSubstitutionIsIdempotent) {
  Generator g(3);
  for (int i = 0; i < 200; ++i) {
    const Formula f = g.formula(3);
    const Expr n = Expr::constant(g.between(-3, 3));
    EXPECT_EQ(subst(subst(f, "X", n), "X", n), subst(f, "X", n));
  }
}

TEST(Distribution, PointDistribution) {
  const auto mu = SubDistribution::point(st("X=0"));
  EXPECT_EQ(mu(st("X=0")), Rational(1));
  EXPECT_EQ(mu.total_mass(), Rational(1));
  EXPECT_EQ(mu.support(), std::vector<State>{st("X=0")});
}

TEST(Distribution, Supports) {
  EXPECT_EQ(half_half().support(), (std::vector<State>{st("X=0"), st("X=1")}));
  EXPECT_TRUE(SubDistribution::zero().support().empty());
}

TEST(Distribution, RejectsInvalidMass) {
  EXPECT_THROW(SubDistribution({{st("X=0"), q("3/4")}, {st("X=1"), q("1/2")}}), std::exception);
  EXPECT_THROW(SubDistribution({{st("X=0"), q("-1/4")}}), std::exception);
  EXPECT_TRUE(SubDistribution({{st("X=0"), q("0")}}).empty());
}

TEST(Distribution, GeneratedMembersRespectBounds) {
  Generator g(11);
  for (int i = 0; i < 300; ++i) {
    const auto mu = g.distribution();
    Rational total;
    for (const auto& [s, p] : mu.entries()) {
      EXPECT_GT(p, Rational(0));
      EXPECT_LE(p, Rational(1));
      total += p;
    }
    EXPECT_LE(total, Rational(1));
    EXPECT_EQ(total, mu.total_mass());
  }
}

TEST(DistSpec, MergesDuplicateValues) {
  std::vector<std::string> warnings;
  const auto d = DistSpec::merged({{q("1/4"), 1}, {q("1/2"), 0}, {q("1/4"), 1}}, &warnings);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.entries()[0].weight, q("1/2"));
  EXPECT_EQ(d.entries()[0].value, Integer(1));
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(DistSpec({{q("1/2"), 0}}), std::invalid_argument);
}

TEST(Simplify, FoldsConstantsAndConnectives) {
  EXPECT_EQ(simplify(fml("true && X = 1")), fml("X = 1"));
  EXPECT_EQ(simplify(fml("!!(X = 1)")), fml("X = 1"));
  EXPECT_EQ(simplify(fml("X = 1 || !(X = 1)")), Formula::truth());
  EXPECT_EQ(simplify(fml("1 + 2 = 3")), Formula::truth());
  EXPECT_EQ(simplify(real("0 * P(X = 1) + 2/3 * P(true)")), real("2/3 * P(true)"));
  EXPECT_EQ(simplify(real("P(false)")), real("0"));
}

TEST(Simplify, PreservesSemantics) {
  Generator g(5);
  const StateWindow w({"X", "Y"}, {-2, 2});
  for (int i = 0; i < 300; ++i) {
    const Formula f = g.formula(3);
    const Formula s = simplify(f);
    for (const auto& st : w.states()) {
      ASSERT_EQ(sat_det(f, st, {}, {-2, 2}), sat_det(s, st, {}, {-2, 2})) << to_string(f) << " vs " << to_string(s);
    }
  }
}

TEST(Normalize, MergesLikeTermsExactly) {
  Generator g(9);
  for (int i = 0; i < 300; ++i) {
    const RealExpr r = g.real_expr(3);
    const RealExpr n = normalize(r);
    for (int k = 0; k < 3; ++k) {
      const auto mu = g.distribution();
      ASSERT_EQ(eval_real(r, mu), eval_real(n, mu)) << to_string(r) << " vs " << to_string(n);
    }
  }
  EXPECT_EQ(normalize(real("P(X = 0) + P(X = 0) - 2 * P(X = 0)")), real("0"));
}
