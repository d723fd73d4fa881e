#pragma once

#include "phl/ast.hpp"
#include "phl/parser.hpp"
#include "phl/printer.hpp"
#include "phl/state.hpp"

namespace phl::test {

inline Command cmd(std::string_view s) { return parse_command(s); }
inline Formula fml(std::string_view s) { return parse_det_formula(s); }
inline RealExpr real(std::string_view s) { return parse_real_expr(s); }
inline ProbFormula pf(std::string_view s) { return parse_prob_formula(s); }
inline State st(std::string_view s) { return parse_state(s); }
inline Rational q(std::string_view s) { return Rational::parse(s); }

// 1/2 on S[X:=0] and 1/2 on S[X:=1] for the one-variable state space.
inline SubDistribution half_half() {
  return SubDistribution({{st("X=0"), q("1/2")}, {st("X=1"), q("1/2")}});
}

inline constexpr const char* kGeometric = "while X = 0 do { X :=$ {1/2:0, 1/2:1}; Y := Y + 1 }";
inline constexpr const char* kCStar = "X :=$ {1/3:0, 2/3:1}; if X = 0 then { while true do { skip } } else { skip }";
inline constexpr const char* kDiverge = "while true do { skip }";

}  // namespace phl::test
