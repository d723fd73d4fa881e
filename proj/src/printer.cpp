#include "phl/printer.hpp"

namespace phl {

namespace {

// Binding strengths. Binary operators are left-associative except "->".
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;

constexpr int kPrecForall = 0;
constexpr int kPrecImplies = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecNot = 4;

int arith_prec(ArithOp op) { return op == ArithOp::mul ? kPrecMul : kPrecAdd; }

std::string paren_if(bool cond, std::string s) { return cond ? "(" + s + ")" : s; }

std::string print_expr(const Expr& e, int ctx);

std::string print_expr(const Expr& e, int ctx) {
  return std::visit(overloaded{
                        [](const IntConst& c) { return c.value.to_string(); },
                        [](const ProgVar& v) { return v.name; },
                        [](const LogVar& v) { return v.name; },
                        [&](const ArithBin& b) {
                          const int p = arith_prec(b.op);
                          auto s = print_expr(b.lhs, p) + " " + std::string(symbol(b.op)) + " " +
                                   print_expr(b.rhs, p + 1);
                          return paren_if(p < ctx, std::move(s));
                        },
                    },
                    e.node());
}

std::string print_formula(const Formula& f, int ctx) {
  return std::visit(
      overloaded{
          [](const BoolConst& c) { return std::string(c.value ? "true" : "false"); },
          [](const Rel& r) {
            return print_expr(r.lhs, 0) + " " + std::string(symbol(r.op)) + " " + print_expr(r.rhs, 0);
          },
          [&](const Not& n) {
            const bool rel = n.arg.is<Rel>();
            return paren_if(kPrecNot < ctx, "!" + paren_if(rel, print_formula(n.arg, kPrecNot)));
          },
          [&](const And& b) {
            return paren_if(kPrecAnd < ctx,
                            print_formula(b.lhs, kPrecAnd) + " && " + print_formula(b.rhs, kPrecAnd + 1));
          },
          [&](const Or& b) {
            return paren_if(kPrecOr < ctx, print_formula(b.lhs, kPrecOr) + " || " + print_formula(b.rhs, kPrecOr + 1));
          },
          [&](const Implies& b) {
            return paren_if(kPrecImplies < ctx,
                            print_formula(b.lhs, kPrecImplies + 1) + " -> " + print_formula(b.rhs, kPrecImplies));
          },
          [&](const Forall& q) {
            // A quantifier body extends as far right as possible, so any
            // enclosing operator needs parentheses.
            return paren_if(ctx > kPrecForall, "forall " + q.var + ". " + print_formula(q.body, kPrecForall));
          },
      },
      f.node());
}

std::string print_real(const RealExpr& r, int ctx) {
  return std::visit(overloaded{
                        [](const RatConst& c) { return c.value.to_string(); },
                        [](const RealVar& v) { return "@" + v.name; },
                        [](const Prob& p) { return "P(" + print_formula(p.phi, kPrecForall) + ")"; },
                        [&](const RealBin& b) {
                          const int p = arith_prec(b.op);
                          auto s = print_real(b.lhs, p) + " " + std::string(symbol(b.op)) + " " +
                                   print_real(b.rhs, p + 1);
                          return paren_if(p < ctx, std::move(s));
                        },
                    },
                    r.node());
}

std::string print_prob(const ProbFormula& f, int ctx) {
  return std::visit(
      overloaded{
          [](const PConst& c) { return std::string(c.value ? "true" : "false"); },
          [](const PRel& r) {
            return print_real(r.lhs, 0) + " " + std::string(symbol(r.op)) + " " + print_real(r.rhs, 0);
          },
          [&](const PNot& n) {
            const bool rel = n.arg.is<PRel>();
            return paren_if(kPrecNot < ctx, "!" + paren_if(rel, print_prob(n.arg, kPrecNot)));
          },
          [&](const PAnd& b) {
            return paren_if(kPrecAnd < ctx, print_prob(b.lhs, kPrecAnd) + " && " + print_prob(b.rhs, kPrecAnd + 1));
          },
          [&](const POr& b) {
            return paren_if(kPrecOr < ctx, print_prob(b.lhs, kPrecOr) + " || " + print_prob(b.rhs, kPrecOr + 1));
          },
          [&](const PImplies& b) {
            return paren_if(kPrecImplies < ctx,
                            print_prob(b.lhs, kPrecImplies + 1) + " -> " + print_prob(b.rhs, kPrecImplies));
          },
      },
      f.node());
}

std::string print_command(const Command& c, bool seq_left) {
  return std::visit(overloaded{
                        [](const Skip&) { return std::string("skip"); },
                        [](const Assign& a) { return a.var + " := " + print_expr(a.value, 0); },
                        [](const PAssign& a) { return a.var + " :=$ " + to_string(a.dist); },
                        [&](const Seq& s) {
                          auto out = print_command(s.first, true) + "; " + print_command(s.second, false);
                          return paren_if(seq_left, std::move(out));
                        },
                        [](const If& i) {
                          return "if " + print_formula(i.guard, kPrecForall) + " then { " +
                                 print_command(i.then_branch, false) + " } else { " +
                                 print_command(i.else_branch, false) + " }";
                        },
                        [](const While& w) {
                          return "while " + print_formula(w.guard, kPrecForall) + " do { " +
                                 print_command(w.body, false) + " }";
                        },
                    },
                    c.node());
}

}  // namespace

std::string to_string(const Expr& e) { return print_expr(e, 0); }
std::string to_string(const Formula& f) { return print_formula(f, kPrecForall); }
std::string to_string(const RealExpr& r) { return print_real(r, 0); }
std::string to_string(const ProbFormula& f) { return print_prob(f, 0); }
std::string to_string(const Command& c) { return print_command(c, false); }

std::string to_string(const DistSpec& d) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : d.entries()) {
    if (!first) out += ", ";
    first = false;
    out += e.weight.to_string() + ":" + e.value.to_string();
  }
  return out + "}";
}

}  // namespace phl
