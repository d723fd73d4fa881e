#include "phl/simplify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "phl/printer.hpp"

namespace phl {

namespace {

std::optional<Integer> int_const(const Expr& e) {
  if (const auto* c = e.as<IntConst>()) return c->value;
  return std::nullopt;
}

std::optional<Rational> rat_const(const RealExpr& r) {
  if (const auto* c = r.as<RatConst>()) return c->value;
  return std::nullopt;
}

std::optional<bool> bool_const(const Formula& f) {
  if (const auto* c = f.as<BoolConst>()) return c->value;
  return std::nullopt;
}

std::optional<bool> pbool_const(const ProbFormula& f) {
  if (const auto* c = f.as<PConst>()) return c->value;
  return std::nullopt;
}

template <class F, class NotT>
bool complementary(const F& a, const F& b) {
  if (const auto* n = a.template as<NotT>(); n && n->arg == b) return true;
  if (const auto* n = b.template as<NotT>(); n && n->arg == a) return true;
  return false;
}

// Reflexive relations hold on identical operands, strict ones fail.
std::optional<bool> same_operand_rel(RelOp op) {
  switch (op) {
    case RelOp::eq:
    case RelOp::le:
    case RelOp::ge: return true;
    case RelOp::lt:
    case RelOp::gt: return false;
  }
  return std::nullopt;
}

Expr offset(Expr base, const Integer& t) {
  if (t.is_zero()) return base;
  if (t.sign() > 0) return Expr::binary(ArithOp::add, std::move(base), Expr::constant(t));
  return Expr::binary(ArithOp::sub, std::move(base), Expr::constant(-t));
}

}  // namespace

Expr mk_arith(ArithOp op, Expr lhs, Expr rhs) {
  const auto a = int_const(lhs);
  const auto b = int_const(rhs);
  if (a && b) return Expr::constant(apply(op, *a, *b));
  switch (op) {
    case ArithOp::add:
      if (a && a->is_zero()) return rhs;
      if (b && b->is_zero()) return lhs;
      break;
    case ArithOp::sub:
      if (b && b->is_zero()) return lhs;
      break;
    case ArithOp::mul:
      if ((a && a->is_zero()) || (b && b->is_zero())) return Expr::constant(0);
      if (a && *a == Integer(1)) return rhs;
      if (b && *b == Integer(1)) return lhs;
      break;
  }
  // (e +- c1) +- c2  ==>  e +- c
  if (b && op != ArithOp::mul) {
    if (const auto* inner = lhs.as<ArithBin>(); inner && inner->op != ArithOp::mul) {
      if (const auto c1 = int_const(inner->rhs)) {
        Integer t = inner->op == ArithOp::add ? *c1 : -*c1;
        t = op == ArithOp::add ? t + *b : t - *b;
        return offset(inner->lhs, t);
      }
    }
  }
  return Expr::binary(op, std::move(lhs), std::move(rhs));
}

Formula mk_rel(RelOp op, Expr lhs, Expr rhs) {
  const auto a = int_const(lhs);
  const auto b = int_const(rhs);
  if (a && b) return Formula::constant(apply(op, *a, *b));
  if (lhs == rhs) return Formula::constant(*same_operand_rel(op));
  return Formula::rel(op, std::move(lhs), std::move(rhs));
}

Formula mk_not(Formula arg) {
  if (const auto c = bool_const(arg)) return Formula::constant(!*c);
  if (const auto* n = arg.as<Not>()) return n->arg;
  return Formula::negation(std::move(arg));
}

Formula mk_and(Formula lhs, Formula rhs) {
  if (const auto c = bool_const(lhs)) return *c ? rhs : lhs;
  if (const auto c = bool_const(rhs)) return *c ? lhs : rhs;
  if (lhs == rhs) return lhs;
  if (complementary<Formula, Not>(lhs, rhs)) return Formula::falsity();
  return Formula::conjunction(std::move(lhs), std::move(rhs));
}

Formula mk_or(Formula lhs, Formula rhs) {
  if (const auto c = bool_const(lhs)) return *c ? lhs : rhs;
  if (const auto c = bool_const(rhs)) return *c ? rhs : lhs;
  if (lhs == rhs) return lhs;
  if (complementary<Formula, Not>(lhs, rhs)) return Formula::truth();
  return Formula::disjunction(std::move(lhs), std::move(rhs));
}

Formula mk_implies(Formula lhs, Formula rhs) {
  if (const auto c = bool_const(lhs)) return *c ? rhs : Formula::truth();
  if (const auto c = bool_const(rhs)) return *c ? rhs : mk_not(std::move(lhs));
  if (lhs == rhs) return Formula::truth();
  return Formula::implication(std::move(lhs), std::move(rhs));
}

Formula mk_forall(std::string var, Formula body) {
  if (!body.has_log_vars() || !free_log_vars(body).contains(var)) return body;
  return Formula::forall(std::move(var), std::move(body));
}

Formula mk_and_all(const std::vector<Formula>& parts) {
  Formula out = Formula::truth();
  for (const auto& p : parts) out = mk_and(out, p);
  return out;
}

Formula mk_or_all(const std::vector<Formula>& parts) {
  Formula out = Formula::falsity();
  for (const auto& p : parts) out = mk_or(out, p);
  return out;
}

RealExpr mk_real(ArithOp op, RealExpr lhs, RealExpr rhs) {
  const auto a = rat_const(lhs);
  const auto b = rat_const(rhs);
  if (a && b) return RealExpr::constant(apply(op, *a, *b));
  switch (op) {
    case ArithOp::add:
      if (a && a->is_zero()) return rhs;
      if (b && b->is_zero()) return lhs;
      break;
    case ArithOp::sub:
      if (b && b->is_zero()) return lhs;
      break;
    case ArithOp::mul:
      if ((a && a->is_zero()) || (b && b->is_zero())) return RealExpr::constant(0);
      if (a && *a == Rational(1)) return rhs;
      if (b && *b == Rational(1)) return lhs;
      break;
  }
  return RealExpr::binary(op, std::move(lhs), std::move(rhs));
}

RealExpr mk_prob(Formula phi) {
  if (const auto c = bool_const(phi); c && !*c) return RealExpr::constant(0);
  return RealExpr::prob(std::move(phi));
}

ProbFormula mk_prel(RelOp op, RealExpr lhs, RealExpr rhs) {
  const auto a = rat_const(lhs);
  const auto b = rat_const(rhs);
  if (a && b) return ProbFormula::constant(apply(op, *a, *b));
  if (lhs == rhs) return ProbFormula::constant(*same_operand_rel(op));
  return ProbFormula::rel(op, std::move(lhs), std::move(rhs));
}

ProbFormula mk_pnot(ProbFormula arg) {
  if (const auto c = pbool_const(arg)) return ProbFormula::constant(!*c);
  if (const auto* n = arg.as<PNot>()) return n->arg;
  return ProbFormula::negation(std::move(arg));
}

ProbFormula mk_pand(ProbFormula lhs, ProbFormula rhs) {
  if (const auto c = pbool_const(lhs)) return *c ? rhs : lhs;
  if (const auto c = pbool_const(rhs)) return *c ? lhs : rhs;
  if (lhs == rhs) return lhs;
  if (complementary<ProbFormula, PNot>(lhs, rhs)) return ProbFormula::constant(false);
  return ProbFormula::conjunction(std::move(lhs), std::move(rhs));
}

ProbFormula mk_por(ProbFormula lhs, ProbFormula rhs) {
  if (const auto c = pbool_const(lhs)) return *c ? lhs : rhs;
  if (const auto c = pbool_const(rhs)) return *c ? rhs : lhs;
  if (lhs == rhs) return lhs;
  if (complementary<ProbFormula, PNot>(lhs, rhs)) return ProbFormula::constant(true);
  return ProbFormula::disjunction(std::move(lhs), std::move(rhs));
}

ProbFormula mk_pimplies(ProbFormula lhs, ProbFormula rhs) {
  if (const auto c = pbool_const(lhs)) return *c ? rhs : ProbFormula::constant(true);
  if (const auto c = pbool_const(rhs)) return *c ? rhs : mk_pnot(std::move(lhs));
  if (lhs == rhs) return ProbFormula::constant(true);
  return ProbFormula::implication(std::move(lhs), std::move(rhs));
}

// --- whole-tree rewriting ---------------------------------------------------

namespace {

// One pass bottom-up, optionally substituting a program variable on the way.
// Shared subtrees are rewritten once.
class Rewriter {
 public:
  Rewriter() = default;
  Rewriter(std::string_view var, Expr by) : var_(var), by_(std::move(by)) {}

  Expr expr(const Expr& e) {
    if (auto it = exprs_.find(e.id()); it != exprs_.end()) return it->second;
    Expr out = std::visit(overloaded{
                              [&](const ProgVar& v) { return (by_ && v.name == var_) ? *by_ : e; },
                              [&](const ArithBin& b) { return mk_arith(b.op, expr(b.lhs), expr(b.rhs)); },
                              [&](const auto&) { return e; },
                          },
                          e.node());
    if (out == e) out = e;
    exprs_.emplace(e.id(), out);
    return out;
  }

  Formula formula(const Formula& f) {
    if (auto it = formulas_.find(f.id()); it != formulas_.end()) return it->second;
    Formula out = std::visit(overloaded{
                                 [&](const BoolConst&) { return f; },
                                 [&](const Rel& r) { return mk_rel(r.op, expr(r.lhs), expr(r.rhs)); },
                                 [&](const Not& n) { return mk_not(formula(n.arg)); },
                                 [&](const And& b) { return mk_and(formula(b.lhs), formula(b.rhs)); },
                                 [&](const Or& b) { return mk_or(formula(b.lhs), formula(b.rhs)); },
                                 [&](const Implies& b) { return mk_implies(formula(b.lhs), formula(b.rhs)); },
                                 [&](const Forall& q) { return mk_forall(q.var, formula(q.body)); },
                             },
                             f.node());
    if (out == f) out = f;
    formulas_.emplace(f.id(), out);
    return out;
  }

  RealExpr real(const RealExpr& r) {
    if (auto it = reals_.find(r.id()); it != reals_.end()) return it->second;
    RealExpr out = std::visit(overloaded{
                                  [&](const Prob& p) { return mk_prob(formula(p.phi)); },
                                  [&](const RealBin& b) { return mk_real(b.op, real(b.lhs), real(b.rhs)); },
                                  [&](const auto&) { return r; },
                              },
                              r.node());
    if (out == r) out = r;
    reals_.emplace(r.id(), out);
    return out;
  }

  ProbFormula prob(const ProbFormula& f) {
    return std::visit(overloaded{
                          [&](const PConst&) { return f; },
                          [&](const PRel& r) { return mk_prel(r.op, real(r.lhs), real(r.rhs)); },
                          [&](const PNot& n) { return mk_pnot(prob(n.arg)); },
                          [&](const PAnd& b) { return mk_pand(prob(b.lhs), prob(b.rhs)); },
                          [&](const POr& b) { return mk_por(prob(b.lhs), prob(b.rhs)); },
                          [&](const PImplies& b) { return mk_pimplies(prob(b.lhs), prob(b.rhs)); },
                      },
                      f.node());
  }

 private:
  std::string_view var_;
  std::optional<Expr> by_;
  std::unordered_map<const void*, Expr> exprs_;
  std::unordered_map<const void*, Formula> formulas_;
  std::unordered_map<const void*, RealExpr> reals_;
};

}  // namespace

Expr simplify(const Expr& e) { return Rewriter().expr(e); }
Formula simplify(const Formula& f) { return Rewriter().formula(f); }
RealExpr simplify(const RealExpr& r) { return Rewriter().real(r); }
ProbFormula simplify(const ProbFormula& f) { return Rewriter().prob(f); }

Formula subst_simplify(const Formula& f, std::string_view var, const Expr& by) {
  if (!f.may_mention(var)) return simplify(f);
  return Rewriter(var, by).formula(f);
}

RealExpr subst_simplify(const RealExpr& r, std::string_view var, const Expr& by) {
  if (!r.may_mention(var)) return simplify(r);
  return Rewriter(var, by).real(r);
}

// --- polynomial normal form -------------------------------------------------

namespace {

int atom_cmp(const RealExpr& a, const RealExpr& b) {
  if (a == b) return 0;
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  const auto sa = to_string(a);
  const auto sb = to_string(b);
  return sa < sb ? -1 : sa > sb ? 1 : 0;
}

struct MonoLess {
  bool operator()(const std::vector<RealExpr>& a, const std::vector<RealExpr>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (const int c = atom_cmp(a[i], b[i]); c != 0) return c < 0;
    }
    return false;
  }
};

using Poly = std::map<std::vector<RealExpr>, Rational, MonoLess>;

void add_term(Poly& p, const std::vector<RealExpr>& mono, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

std::optional<Poly> to_poly(const RealExpr& r, std::size_t max_terms, Rewriter& rw) {
  return std::visit(
      overloaded{
          [&](const RatConst& c) -> std::optional<Poly> {
            Poly p;
            add_term(p, {}, c.value);
            return p;
          },
          [&](const RealVar&) -> std::optional<Poly> { return Poly{{{r}, Rational(1)}}; },
          [&](const Prob& pr) -> std::optional<Poly> {
            const auto atom = mk_prob(rw.formula(pr.phi));
            if (atom.is<RatConst>()) return Poly{};
            return Poly{{{atom}, Rational(1)}};
          },
          [&](const RealBin& b) -> std::optional<Poly> {
            auto l = to_poly(b.lhs, max_terms, rw);
            if (!l) return std::nullopt;
            auto rr = to_poly(b.rhs, max_terms, rw);
            if (!rr) return std::nullopt;
            if (b.op != ArithOp::mul) {
              const Rational sign = b.op == ArithOp::add ? Rational(1) : Rational(-1);
              for (const auto& [m, c] : *rr) add_term(*l, m, c * sign);
              if (l->size() > max_terms) return std::nullopt;
              return l;
            }
            if (l->size() * rr->size() > max_terms) return std::nullopt;
            Poly out;
            for (const auto& [ma, ca] : *l) {
              for (const auto& [mb, cb] : *rr) {
                std::vector<RealExpr> m = ma;
                m.insert(m.end(), mb.begin(), mb.end());
                std::sort(m.begin(), m.end(), [](const RealExpr& x, const RealExpr& y) { return atom_cmp(x, y) < 0; });
                add_term(out, m, ca * cb);
              }
            }
            return out;
          },
      },
      r.node());
}

}  // namespace

RealExpr normalize(const RealExpr& r, std::size_t max_terms) {
  Rewriter rw;
  const auto poly = to_poly(r, max_terms, rw);
  if (!poly) return simplify(r);

  std::optional<RealExpr> out;
  auto push = [&](const RealExpr& mono, const Rational& c) {
    if (!out) {
      out = c == Rational(1) ? mono : RealExpr::binary(ArithOp::mul, RealExpr::constant(c), mono);
      return;
    }
    const Rational mag = c.sign() < 0 ? -c : c;
    const RealExpr term = mag == Rational(1) ? mono : RealExpr::binary(ArithOp::mul, RealExpr::constant(mag), mono);
    out = RealExpr::binary(c.sign() < 0 ? ArithOp::sub : ArithOp::add, *out, term);
  };

  std::optional<Rational> constant;
  for (const auto& [mono, c] : *poly) {
    if (mono.empty()) {
      constant = c;
      continue;
    }
    RealExpr m = mono.front();
    for (std::size_t i = 1; i < mono.size(); ++i) m = RealExpr::binary(ArithOp::mul, m, mono[i]);
    push(m, c);
  }
  if (constant) {
    if (!out) return RealExpr::constant(*constant);
    const Rational mag = constant->sign() < 0 ? -*constant : *constant;
    out = RealExpr::binary(constant->sign() < 0 ? ArithOp::sub : ArithOp::add, *out, RealExpr::constant(mag));
  }
  return out ? *out : RealExpr::constant(0);
}

}  // namespace phl
