#include <gtest/gtest.h>

#include "helpers.hpp"
#include "phl/generate.hpp"
#include "phl/preterm.hpp"
#include "phl/proofsys.hpp"
#include "phl/wp.hpp"

using namespace phl;
using namespace phl::test;

namespace {

constexpr const char* kDivergeProof = R"({
  "rule": "CONS",
  "conclusion": "{ true } while true do { skip } { P(true) = 0 }",
  "premises": [
    {"rule": "WHILE", "conclusion": "{ 0 = 0 } while true do { skip } { P(true) = 0 }", "premises": []}
  ],
  "side": ["true -> 0 = 0", "P(true) = 0 -> P(true) = 0"]
})";

Derivation leaf(Rule r, std::string_view triple) {
  Derivation d;
  d.rule = r;
  d.conclusion = parse_triple(triple);
  return d;
}

Config small_config() {
  Config cfg;
  cfg.int_window = {-2, 2};
  cfg.quant_window = {-2, 2};
  return cfg;
}

}  // namespace

TEST(Rules, Names) {
  EXPECT_EQ(parse_rule("WHILE"), Rule::while_);
  EXPECT_EQ(to_string(Rule::if_), "IF");
  EXPECT_THROW(parse_rule("FRAME"), Error);
}

TEST(Proof, DivergenceDerivation) {
  const auto c = check_derivation(parse_derivation_json(kDivergeProof), Config{});
  EXPECT_TRUE(c.accepted) << c.node << ": " << c.reason;
  EXPECT_EQ(c.nodes, 2);
  EXPECT_EQ(c.scope.rfind("on family seed=0", 0), 0u);
}

TEST(Proof, AssignmentAxiom) {
  EXPECT_TRUE(check_derivation(leaf(Rule::as, "{X + 1 = 1} X := X + 1 {X = 1}"), Config{}).accepted);
  EXPECT_TRUE(check_derivation(leaf(Rule::as, "{forall x. x > 0} X := 0 {forall x. x > X}"), Config{}).accepted);
  const auto bad = check_derivation(leaf(Rule::as, "{X = 1} X := X + 1 {X = 1}"), Config{});
  EXPECT_FALSE(bad.accepted);
  EXPECT_EQ(bad.node, "root");
  EXPECT_NE(bad.reason.find("schema mismatch"), std::string::npos);
}

TEST(Proof, ProbabilisticAssignmentAxiom) {
  EXPECT_TRUE(check_derivation(leaf(Rule::pas, "{(0 = 0 || Y = 0) && (1 = 0 || Y = 0)} X :=$ {1/2:0, 1/2:1} {X = 0 || Y = 0}"),
                               Config{}).accepted);
  EXPECT_FALSE(check_derivation(leaf(Rule::pas, "{0 = 0 || Y = 0} X :=$ {1/2:0, 1/2:1} {X = 0 || Y = 0}"),
                                Config{}).accepted);
}

TEST(Proof, ArityAndCommandShape) {
  Derivation d = leaf(Rule::seq, "{X = 0} X := 1; X := 2 {X = 2}");
  EXPECT_FALSE(check_derivation(d, Config{}).accepted);
  d.premises = {leaf(Rule::as, "{1 = 1} X := 1 {X = 1}"), leaf(Rule::as, "{2 = 2} X := 2 {X = 2}")};
  const auto c = check_derivation(d, Config{});
  EXPECT_FALSE(c.accepted);
  EXPECT_NE(c.reason.find("precondition"), std::string::npos);
}

TEST(Proof, ConsequenceSideConditionCounterexample) {
  Derivation d = leaf(Rule::cons, "{X >= 0} X := X + 1 {X = 1}");
  d.premises = {leaf(Rule::as, "{X + 1 = 1} X := X + 1 {X = 1}")};
  const auto c = check_derivation(d, Config{});
  EXPECT_FALSE(c.accepted);
  ASSERT_TRUE(c.counterexample.has_value());
  EXPECT_EQ(c.counterexample->kind, Verdict::Kind::counterexample);
}

TEST(Proof, WhileNeedsInvariantShape) {
  Derivation d = leaf(Rule::while_, "{X <= 3} while X < 3 do { X := X + 1 } {X <= 3 && !(X < 3)}");
  d.premises = {leaf(Rule::cons, "{X <= 3 && X < 3} X := X + 1 {X <= 3}")};
  d.premises[0].premises = {leaf(Rule::as, "{X + 1 <= 3} X := X + 1 {X <= 3}")};
  EXPECT_TRUE(check_derivation(d, Config{}).accepted);
  d.conclusion = parse_triple("{X <= 3} while X < 3 do { X := X + 1 } {X = 3}");
  EXPECT_FALSE(check_derivation(d, Config{}).accepted);
}

TEST(Proof, NoAndOrInProbabilisticSystem) {
  Derivation d = leaf(Rule::and_, "{P(true) = 1 && P(true) = 1} skip {P(true) = 1 && P(true) = 1}");
  d.premises = {leaf(Rule::skip, "{P(true) = 1} skip {P(true) = 1}"), leaf(Rule::skip, "{P(true) = 1} skip {P(true) = 1}")};
  const auto c = check_derivation(d, Config{});
  EXPECT_FALSE(c.accepted);
  EXPECT_NE(c.reason.find("not a rule"), std::string::npos);
}

TEST(Proof, ProbabilisticAxiomRejectsWrongPrecondition) {
  EXPECT_FALSE(check_derivation(leaf(Rule::pas, "{P(true) <= 2/3} X :=$ {1/3:0, 2/3:1} {P(X = 1) <= 2/3}"), Config{}).accepted);
  EXPECT_TRUE(check_derivation(leaf(Rule::pas, "{2/3 * P(true) <= 2/3} X :=$ {1/3:0, 2/3:1} {P(X = 1) <= 2/3}"), Config{}).accepted);
}

TEST(Proof, JsonRoundTrip) {
  const Derivation d = parse_derivation_json(kDivergeProof);
  const Derivation again = parse_derivation_json(to_json(d));
  EXPECT_EQ(to_json(again), to_json(d));
  EXPECT_THROW(parse_derivation_json(R"({"rule": "CONS"})"), Error);
  EXPECT_THROW(parse_derivation_json(R"({"rule": "NOPE", "conclusion": "{true} skip {true}"})"), Error);
  EXPECT_THROW(parse_derivation_json("[1,"), Error);
}

TEST(Proof, CanonicalDerivationsOfWorkedTriples) {
  const Config cfg;
  for (const char* t : {"{ true } while true do { skip } { P(true) = 0 }",
                        "{ true } X :=$ {1/3:0, 2/3:1}; if X = 0 then { while true do { skip } } else { skip } { P(true) <= 2/3 }",
                        "{ true } X :=$ {1/2:0, 1/2:1} { X = 0 || X = 1 }", "{ X = 0 } while X = 0 do { X := 1 } { X = 1 }"}) {
    const Derivation d = canonical_derivation(parse_triple(t), cfg);
    EXPECT_EQ(d.rule, Rule::cons);
    const auto c = check_derivation(parse_derivation_json(to_json(d)), cfg);
    EXPECT_TRUE(c.accepted) << t << "\n" << c.node << ": " << c.reason;
  }
}

TEST(Proof, CanonicalDerivationOfInvalidTripleIsRejected) {
  const auto c = check_derivation(canonical_derivation(parse_triple("{ true } X :=$ {1/2:0, 1/2:1} { X = 0 }"), Config{}),
                                  Config{});
  EXPECT_FALSE(c.accepted);
  EXPECT_EQ(c.node, "root");
}

TEST(Proof, AcceptedDerivationsAreSemanticallyValid) {
  const Config cfg = small_config();
  Generator g(307);
  const StateWindow w({"X", "Y"}, cfg.int_window);
  int accepted = 0;
  for (int n = 0; n < 80; ++n) {
    const Command c = g.command(2);
    const Formula pre = g.formula(1);
    const Formula post = g.formula(1);
    const Derivation d = canonical_derivation(SourceTriple{Flavor::deterministic, pre, c, post}, cfg);
    if (!check_derivation(d, cfg).accepted) continue;
    ++accepted;
    EXPECT_TRUE(check_triple_det(pre, c, post, w, cfg.quant_window, cfg.loop_bound).ok()) << to_string(c);
  }
  for (int n = 0; n < 40; ++n) {
    const Command c = g.loop_free(2);
    const ProbFormula pre = g.prob_formula(1);
    const ProbFormula post = g.prob_formula(1);
    const Derivation d = canonical_derivation(SourceTriple{Flavor::probabilistic, pre, c, post}, cfg);
    if (!check_derivation(d, cfg).accepted) continue;
    ++accepted;
    EXPECT_TRUE(check_triple_prob(pre, c, post, DistFamily(w, cfg.seed), cfg).ok()) << to_string(c);
  }
  EXPECT_GT(accepted, 10);
}

TEST(Proof, CanonicalDerivationsOfValidTriplesAreAccepted) {
  const Config cfg = small_config();
  Generator g(311);
  const StateWindow w({"X", "Y"}, cfg.int_window);
  int tried = 0;
  for (int n = 0; n < 150 && tried < 25; ++n) {
    const Command c = g.loop_free(2);
    const Formula pre = g.formula(1);
    const Formula post = g.formula(1);
    if (!check_triple_det(pre, c, post, w, cfg.quant_window, cfg.loop_bound).ok()) continue;
    ++tried;
    const auto r = check_derivation(canonical_derivation(SourceTriple{Flavor::deterministic, pre, c, post}, cfg), cfg);
    EXPECT_TRUE(r.accepted) << to_string(c) << ": " << r.node << " " << r.reason;
  }
  EXPECT_GE(tried, 25);
}

TEST(Soundness, GeneratedRuleInstances) {
  const auto report = rule_soundness_suite(5, 12, small_config());
  for (int r = 0; r < 9; ++r) EXPECT_EQ(report.instances[r], 12) << to_string(static_cast<Rule>(r));
  EXPECT_TRUE(report.failures.empty());
}
