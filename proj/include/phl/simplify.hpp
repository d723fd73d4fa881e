#pragma once

// Semantics-preserving rewriting: smart constructors that fold constants and
// absorb units, whole-tree simplification built on them, and a polynomial
// normal form for real expressions.

#include <cstddef>
#include <string_view>
#include <vector>

#include "phl/ast.hpp"

namespace phl {

Expr mk_arith(ArithOp op, Expr lhs, Expr rhs);

Formula mk_rel(RelOp op, Expr lhs, Expr rhs);
Formula mk_not(Formula arg);
Formula mk_and(Formula lhs, Formula rhs);
Formula mk_or(Formula lhs, Formula rhs);
Formula mk_implies(Formula lhs, Formula rhs);
Formula mk_forall(std::string var, Formula body);
/// Left-nested conjunction; empty list gives true.
Formula mk_and_all(const std::vector<Formula>& parts);
Formula mk_or_all(const std::vector<Formula>& parts);

RealExpr mk_real(ArithOp op, RealExpr lhs, RealExpr rhs);
/// P(false) folds to 0.
RealExpr mk_prob(Formula phi);

ProbFormula mk_prel(RelOp op, RealExpr lhs, RealExpr rhs);
ProbFormula mk_pnot(ProbFormula arg);
ProbFormula mk_pand(ProbFormula lhs, ProbFormula rhs);
ProbFormula mk_por(ProbFormula lhs, ProbFormula rhs);
ProbFormula mk_pimplies(ProbFormula lhs, ProbFormula rhs);

Expr simplify(const Expr& e);
Formula simplify(const Formula& f);
RealExpr simplify(const RealExpr& r);
ProbFormula simplify(const ProbFormula& f);

/// phi[X/E] rebuilt through the smart constructors.
Formula subst_simplify(const Formula& f, std::string_view var, const Expr& by);
RealExpr subst_simplify(const RealExpr& r, std::string_view var, const Expr& by);

/// Sum of coefficient * monomial over P(.) and @x atoms, like terms merged,
/// zero coefficients dropped, constant last. Falls back to simplify() when
/// the expansion would exceed max_terms monomials.
RealExpr normalize(const RealExpr& r, std::size_t max_terms = 4096);

}  // namespace phl
