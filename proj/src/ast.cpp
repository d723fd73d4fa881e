#include "phl/ast.hpp"

#include <stdexcept>

namespace phl {

std::string_view symbol(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
  }
  return "?";
}

std::string_view symbol(RelOp op) {
  switch (op) {
    case RelOp::lt: return "<";
    case RelOp::le: return "<=";
    case RelOp::eq: return "=";
    case RelOp::ge: return ">=";
    case RelOp::gt: return ">";
  }
  return "?";
}

Integer apply(ArithOp op, const Integer& a, const Integer& b) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
  }
  return {};
}

Rational apply(ArithOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
  }
  return {};
}

std::uint64_t var_bit(std::string_view name) {
  return std::uint64_t{1} << (std::hash<std::string_view>{}(name) % 64);
}

namespace {

using detail::sat_add;
using detail::TreeImpl;

// Distinct salts keep e.g. Not(x) and PNot(x) from colliding trivially.
enum Salt : std::size_t {
  kIntConst = 11, kProgVar, kLogVar, kArithBin,
  kBoolConst = 31, kRel, kNot, kAnd, kOr, kImplies, kForall,
  kRatConst = 51, kRealVar, kProb, kRealBin,
  kPConst = 71, kPRel, kPNot, kPAnd, kPOr, kPImplies,
  kSkip = 91, kAssign, kPAssign, kSeq, kIf, kWhile,
};

std::size_t str_hash(std::string_view s) { return std::hash<std::string_view>{}(s); }

template <class Node>
auto make_impl(Node node, std::size_t hash, std::uint64_t size, std::uint64_t mask, bool has_log) {
  auto impl = std::make_shared<TreeImpl<Node>>();
  impl->node = std::move(node);
  impl->hash = hash;
  impl->size = size;
  impl->prog_mask = mask;
  impl->has_log = has_log;
  return std::shared_ptr<const TreeImpl<Node>>(std::move(impl));
}

template <class H>
std::size_t combine2(std::size_t salt, std::size_t op, const H& a, const H& b) {
  return hash_combine(hash_combine(hash_combine(salt, op), a.hash()), b.hash());
}

}  // namespace

// --- Expr -------------------------------------------------------------------

Expr Expr::constant(Integer value) {
  const auto h = hash_combine(kIntConst, value.hash());
  return Expr(make_impl<ExprNode>(IntConst{std::move(value)}, h, 1, 0, false));
}

Expr Expr::prog_var(std::string name) {
  const auto h = hash_combine(kProgVar, str_hash(name));
  const auto mask = var_bit(name);
  return Expr(make_impl<ExprNode>(ProgVar{std::move(name)}, h, 1, mask, false));
}

Expr Expr::log_var(std::string name) {
  const auto h = hash_combine(kLogVar, str_hash(name));
  return Expr(make_impl<ExprNode>(LogVar{std::move(name)}, h, 1, 0, true));
}

Expr Expr::binary(ArithOp op, Expr lhs, Expr rhs) {
  const auto h = combine2(kArithBin, static_cast<std::size_t>(op), lhs, rhs);
  const auto size = sat_add(1, sat_add(lhs.size(), rhs.size()));
  const auto mask = lhs.prog_mask() | rhs.prog_mask();
  const bool log = lhs.has_log_vars() || rhs.has_log_vars();
  return Expr(make_impl<ExprNode>(ArithBin{op, std::move(lhs), std::move(rhs)}, h, size, mask, log));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return a.node() == b.node();
}

// --- Formula ----------------------------------------------------------------

Formula Formula::truth() {
  static const Formula t(make_impl<FormulaNode>(BoolConst{true}, hash_combine(kBoolConst, 1), 1, 0, false));
  return t;
}

Formula Formula::falsity() {
  static const Formula f(make_impl<FormulaNode>(BoolConst{false}, hash_combine(kBoolConst, 0), 1, 0, false));
  return f;
}

Formula Formula::constant(bool value) { return value ? truth() : falsity(); }

Formula Formula::rel(RelOp op, Expr lhs, Expr rhs) {
  const auto h = combine2(kRel, static_cast<std::size_t>(op), lhs, rhs);
  const auto size = sat_add(1, sat_add(lhs.size(), rhs.size()));
  const auto mask = lhs.prog_mask() | rhs.prog_mask();
  const bool log = lhs.has_log_vars() || rhs.has_log_vars();
  return Formula(make_impl<FormulaNode>(Rel{op, std::move(lhs), std::move(rhs)}, h, size, mask, log));
}

Formula Formula::negation(Formula arg) {
  const auto h = hash_combine(kNot, arg.hash());
  const auto size = sat_add(1, arg.size());
  const auto mask = arg.prog_mask();
  const bool log = arg.has_log_vars();
  return Formula(make_impl<FormulaNode>(Not{std::move(arg)}, h, size, mask, log));
}

#define PHL_FORMULA_BINARY(NAME, NODE, SALT)                                                        \
  Formula Formula::NAME(Formula lhs, Formula rhs) {                                                 \
    const auto h = combine2(SALT, 0, lhs, rhs);                                                     \
    const auto size = sat_add(1, sat_add(lhs.size(), rhs.size()));                                  \
    const auto mask = lhs.prog_mask() | rhs.prog_mask();                                            \
    const bool log = lhs.has_log_vars() || rhs.has_log_vars();                                      \
    return Formula(make_impl<FormulaNode>(NODE{std::move(lhs), std::move(rhs)}, h, size, mask, log)); \
  }

PHL_FORMULA_BINARY(conjunction, And, kAnd)
PHL_FORMULA_BINARY(disjunction, Or, kOr)
PHL_FORMULA_BINARY(implication, Implies, kImplies)
#undef PHL_FORMULA_BINARY

Formula Formula::forall(std::string var, Formula body) {
  const auto h = hash_combine(hash_combine(kForall, str_hash(var)), body.hash());
  const auto size = sat_add(1, body.size());
  const auto mask = body.prog_mask();
  return Formula(make_impl<FormulaNode>(Forall{std::move(var), std::move(body)}, h, size, mask, true));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.same_node(b)) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return a.node() == b.node();
}

// --- RealExpr ---------------------------------------------------------------

RealExpr RealExpr::constant(Rational value) {
  const auto h = hash_combine(kRatConst, value.hash());
  return RealExpr(make_impl<RealNode>(RatConst{std::move(value)}, h, 1, 0, false));
}

RealExpr RealExpr::var(std::string name) {
  const auto h = hash_combine(kRealVar, str_hash(name));
  return RealExpr(make_impl<RealNode>(RealVar{std::move(name)}, h, 1, 0, false));
}

RealExpr RealExpr::prob(Formula phi) {
  const auto h = hash_combine(kProb, phi.hash());
  const auto size = sat_add(1, phi.size());
  const auto mask = phi.prog_mask();
  const bool log = phi.has_log_vars();
  return RealExpr(make_impl<RealNode>(Prob{std::move(phi)}, h, size, mask, log));
}

RealExpr RealExpr::binary(ArithOp op, RealExpr lhs, RealExpr rhs) {
  const auto h = combine2(kRealBin, static_cast<std::size_t>(op), lhs, rhs);
  const auto size = sat_add(1, sat_add(lhs.size(), rhs.size()));
  const auto mask = lhs.prog_mask() | rhs.prog_mask();
  const bool log = lhs.has_log_vars() || rhs.has_log_vars();
  return RealExpr(make_impl<RealNode>(RealBin{op, std::move(lhs), std::move(rhs)}, h, size, mask, log));
}

bool operator==(const RealExpr& a, const RealExpr& b) {
  if (a.same_node(b)) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return a.node() == b.node();
}

// --- ProbFormula ------------------------------------------------------------

ProbFormula ProbFormula::constant(bool value) {
  return ProbFormula(make_impl<ProbNode>(PConst{value}, hash_combine(kPConst, value ? 1 : 0), 1, 0, false));
}

ProbFormula ProbFormula::rel(RelOp op, RealExpr lhs, RealExpr rhs) {
  const auto h = combine2(kPRel, static_cast<std::size_t>(op), lhs, rhs);
  const auto size = sat_add(1, sat_add(lhs.size(), rhs.size()));
  const auto mask = lhs.prog_mask() | rhs.prog_mask();
  const bool log = lhs.has_log_vars() || rhs.has_log_vars();
  return ProbFormula(make_impl<ProbNode>(PRel{op, std::move(lhs), std::move(rhs)}, h, size, mask, log));
}

ProbFormula ProbFormula::negation(ProbFormula arg) {
  const auto h = hash_combine(kPNot, arg.hash());
  const auto size = sat_add(1, arg.size());
  const auto mask = arg.prog_mask();
  const bool log = arg.has_log_vars();
  return ProbFormula(make_impl<ProbNode>(PNot{std::move(arg)}, h, size, mask, log));
}

#define PHL_PROB_BINARY(NAME, NODE, SALT)                                                               \
  ProbFormula ProbFormula::NAME(ProbFormula lhs, ProbFormula rhs) {                                     \
    const auto h = combine2(SALT, 0, lhs, rhs);                                                         \
    const auto size = sat_add(1, sat_add(lhs.size(), rhs.size()));                                      \
    const auto mask = lhs.prog_mask() | rhs.prog_mask();                                                \
    const bool log = lhs.has_log_vars() || rhs.has_log_vars();                                          \
    return ProbFormula(make_impl<ProbNode>(NODE{std::move(lhs), std::move(rhs)}, h, size, mask, log)); \
  }

PHL_PROB_BINARY(conjunction, PAnd, kPAnd)
PHL_PROB_BINARY(disjunction, POr, kPOr)
PHL_PROB_BINARY(implication, PImplies, kPImplies)
#undef PHL_PROB_BINARY

bool operator==(const ProbFormula& a, const ProbFormula& b) {
  if (a.same_node(b)) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return a.node() == b.node();
}

// --- DistSpec ---------------------------------------------------------------

DistSpec::DistSpec(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("probabilistic assignment needs at least one outcome");
  Rational total;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& w = entries_[i].weight;
    if (w.sign() < 0 || w > Rational(1)) {
      throw std::invalid_argument("weight " + w.to_string() + " outside [0,1]");
    }
    total += w;
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j].value == entries_[i].value) {
        throw std::invalid_argument("duplicate outcome " + entries_[i].value.to_string());
      }
    }
  }
  if (total != Rational(1)) throw std::invalid_argument("weights sum to " + total.to_string() + ", expected 1");
}

DistSpec DistSpec::merged(const std::vector<Entry>& entries, std::vector<std::string>* warnings) {
  std::vector<Entry> out;
  for (const auto& e : entries) {
    bool found = false;
    for (auto& o : out) {
      if (o.value == e.value) {
        o.weight += e.weight;
        found = true;
        if (warnings) warnings->push_back("duplicate outcome " + e.value.to_string() + " merged by summing weights");
        break;
      }
    }
    if (!found) out.push_back(e);
  }
  return DistSpec(std::move(out));
}

// --- Command ----------------------------------------------------------------

Command Command::skip() {
  static const Command s(make_impl<CommandNode>(Skip{}, kSkip, 1, 0, false));
  return s;
}

Command Command::assign(std::string var, Expr value) {
  if (value.has_log_vars()) throw std::invalid_argument("assigned expression mentions a logical variable");
  const auto h = hash_combine(hash_combine(kAssign, str_hash(var)), value.hash());
  const auto mask = value.prog_mask() | var_bit(var);
  const auto size = sat_add(1, value.size());
  return Command(make_impl<CommandNode>(Assign{std::move(var), std::move(value)}, h, size, mask, false));
}

Command Command::passign(std::string var, DistSpec dist) {
  std::size_t h = hash_combine(kPAssign, str_hash(var));
  for (const auto& e : dist.entries()) h = hash_combine(hash_combine(h, e.weight.hash()), e.value.hash());
  const auto mask = var_bit(var);
  const auto size = 1 + dist.size();
  return Command(make_impl<CommandNode>(PAssign{std::move(var), std::move(dist)}, h, size, mask, false));
}

Command Command::seq(Command first, Command second) {
  const auto h = combine2(kSeq, 0, first, second);
  const auto size = sat_add(1, sat_add(first.size(), second.size()));
  const auto mask = first.prog_mask() | second.prog_mask();
  return Command(make_impl<CommandNode>(Seq{std::move(first), std::move(second)}, h, size, mask, false));
}

Command Command::if_then_else(Formula guard, Command then_branch, Command else_branch) {
  if (!is_guard(guard)) throw std::invalid_argument("guard mentions a logical variable or quantifier");
  const auto h = hash_combine(combine2(kIf, 0, then_branch, else_branch), guard.hash());
  const auto size = sat_add(1, sat_add(guard.size(), sat_add(then_branch.size(), else_branch.size())));
  const auto mask = guard.prog_mask() | then_branch.prog_mask() | else_branch.prog_mask();
  return Command(make_impl<CommandNode>(If{std::move(guard), std::move(then_branch), std::move(else_branch)}, h,
                                        size, mask, false));
}

Command Command::while_do(Formula guard, Command body) {
  if (!is_guard(guard)) throw std::invalid_argument("guard mentions a logical variable or quantifier");
  const auto h = hash_combine(hash_combine(kWhile, guard.hash()), body.hash());
  const auto size = sat_add(1, sat_add(guard.size(), body.size()));
  const auto mask = guard.prog_mask() | body.prog_mask();
  return Command(make_impl<CommandNode>(While{std::move(guard), std::move(body)}, h, size, mask, false));
}

bool operator==(const Command& a, const Command& b) {
  if (a.same_node(b)) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return a.node() == b.node();
}

// --- variables --------------------------------------------------------------

void collect_prog_vars(const Expr& e, NameSet& out) {
  std::visit(overloaded{
                 [&](const ProgVar& v) { out.insert(v.name); },
                 [&](const ArithBin& b) {
                   collect_prog_vars(b.lhs, out);
                   collect_prog_vars(b.rhs, out);
                 },
                 [](const auto&) {},
             },
             e.node());
}

void collect_prog_vars(const Formula& f, NameSet& out) {
  if (f.prog_mask() == 0) return;
  std::visit(overloaded{
                 [](const BoolConst&) {},
                 [&](const Rel& r) {
                   collect_prog_vars(r.lhs, out);
                   collect_prog_vars(r.rhs, out);
                 },
                 [&](const Not& n) { collect_prog_vars(n.arg, out); },
                 [&](const Forall& q) { collect_prog_vars(q.body, out); },
                 [&](const auto& b) {
                   collect_prog_vars(b.lhs, out);
                   collect_prog_vars(b.rhs, out);
                 },
             },
             f.node());
}

void collect_prog_vars(const RealExpr& r, NameSet& out) {
  if (r.prog_mask() == 0) return;
  std::visit(overloaded{
                 [&](const Prob& p) { collect_prog_vars(p.phi, out); },
                 [&](const RealBin& b) {
                   collect_prog_vars(b.lhs, out);
                   collect_prog_vars(b.rhs, out);
                 },
                 [](const auto&) {},
             },
             r.node());
}

void collect_prog_vars(const ProbFormula& f, NameSet& out) {
  if (f.prog_mask() == 0) return;
  std::visit(overloaded{
                 [](const PConst&) {},
                 [&](const PRel& r) {
                   collect_prog_vars(r.lhs, out);
                   collect_prog_vars(r.rhs, out);
                 },
                 [&](const PNot& n) { collect_prog_vars(n.arg, out); },
                 [&](const auto& b) {
                   collect_prog_vars(b.lhs, out);
                   collect_prog_vars(b.rhs, out);
                 },
             },
             f.node());
}

void collect_prog_vars(const Command& c, NameSet& out) {
  std::visit(overloaded{
                 [](const Skip&) {},
                 [&](const Assign& a) {
                   out.insert(a.var);
                   collect_prog_vars(a.value, out);
                 },
                 [&](const PAssign& a) { out.insert(a.var); },
                 [&](const Seq& s) {
                   collect_prog_vars(s.first, out);
                   collect_prog_vars(s.second, out);
                 },
                 [&](const If& i) {
                   collect_prog_vars(i.guard, out);
                   collect_prog_vars(i.then_branch, out);
                   collect_prog_vars(i.else_branch, out);
                 },
                 [&](const While& w) {
                   collect_prog_vars(w.guard, out);
                   collect_prog_vars(w.body, out);
                 },
             },
             c.node());
}

namespace {

void free_log_vars_expr(const Expr& e, const std::vector<std::string_view>& bound, NameSet& out) {
  if (!e.has_log_vars()) return;
  std::visit(overloaded{
                 [&](const LogVar& v) {
                   for (auto b : bound) {
                     if (b == v.name) return;
                   }
                   out.insert(v.name);
                 },
                 [&](const ArithBin& b) {
                   free_log_vars_expr(b.lhs, bound, out);
                   free_log_vars_expr(b.rhs, bound, out);
                 },
                 [](const auto&) {},
             },
             e.node());
}

void free_log_vars_formula(const Formula& f, std::vector<std::string_view>& bound, NameSet& out) {
  if (!f.has_log_vars()) return;
  std::visit(overloaded{
                 [](const BoolConst&) {},
                 [&](const Rel& r) {
                   free_log_vars_expr(r.lhs, bound, out);
                   free_log_vars_expr(r.rhs, bound, out);
                 },
                 [&](const Not& n) { free_log_vars_formula(n.arg, bound, out); },
                 [&](const Forall& q) {
                   bound.push_back(q.var);
                   free_log_vars_formula(q.body, bound, out);
                   bound.pop_back();
                 },
                 [&](const auto& b) {
                   free_log_vars_formula(b.lhs, bound, out);
                   free_log_vars_formula(b.rhs, bound, out);
                 },
             },
             f.node());
}

void free_log_vars_real(const RealExpr& r, NameSet& out) {
  if (!r.has_log_vars()) return;
  std::visit(overloaded{
                 [&](const Prob& p) {
                   std::vector<std::string_view> bound;
                   free_log_vars_formula(p.phi, bound, out);
                 },
                 [&](const RealBin& b) {
                   free_log_vars_real(b.lhs, out);
                   free_log_vars_real(b.rhs, out);
                 },
                 [](const auto&) {},
             },
             r.node());
}

void free_log_vars_prob(const ProbFormula& f, NameSet& out) {
  std::visit(overloaded{
                 [](const PConst&) {},
                 [&](const PRel& r) {
                   free_log_vars_real(r.lhs, out);
                   free_log_vars_real(r.rhs, out);
                 },
                 [&](const PNot& n) { free_log_vars_prob(n.arg, out); },
                 [&](const auto& b) {
                   free_log_vars_prob(b.lhs, out);
                   free_log_vars_prob(b.rhs, out);
                 },
             },
             f.node());
}

void real_vars_real(const RealExpr& r, NameSet& out) {
  std::visit(overloaded{
                 [&](const RealVar& v) { out.insert(v.name); },
                 [&](const RealBin& b) {
                   real_vars_real(b.lhs, out);
                   real_vars_real(b.rhs, out);
                 },
                 [](const auto&) {},
             },
             r.node());
}

void real_vars_prob(const ProbFormula& f, NameSet& out) {
  std::visit(overloaded{
                 [](const PConst&) {},
                 [&](const PRel& r) {
                   real_vars_real(r.lhs, out);
                   real_vars_real(r.rhs, out);
                 },
                 [&](const PNot& n) { real_vars_prob(n.arg, out); },
                 [&](const auto& b) {
                   real_vars_prob(b.lhs, out);
                   real_vars_prob(b.rhs, out);
                 },
             },
             f.node());
}

}  // namespace

NameSet free_log_vars(const Formula& f) {
  NameSet out;
  std::vector<std::string_view> bound;
  free_log_vars_formula(f, bound, out);
  return out;
}

NameSet free_log_vars(const RealExpr& r) {
  NameSet out;
  free_log_vars_real(r, out);
  return out;
}

NameSet free_log_vars(const ProbFormula& f) {
  NameSet out;
  free_log_vars_prob(f, out);
  return out;
}

NameSet real_vars(const RealExpr& r) {
  NameSet out;
  real_vars_real(r, out);
  return out;
}

NameSet real_vars(const ProbFormula& f) {
  NameSet out;
  real_vars_prob(f, out);
  return out;
}

// --- substitution -----------------------------------------------------------

Expr subst(const Expr& e, std::string_view var, const Expr& by) {
  if (!e.may_mention(var)) return e;
  return std::visit(overloaded{
                        [&](const ProgVar& v) { return v.name == var ? by : e; },
                        [&](const ArithBin& b) {
                          auto l = subst(b.lhs, var, by);
                          auto r = subst(b.rhs, var, by);
                          if (l.same_node(b.lhs) && r.same_node(b.rhs)) return e;
                          return Expr::binary(b.op, std::move(l), std::move(r));
                        },
                        [&](const auto&) { return e; },
                    },
                    e.node());
}

Formula subst(const Formula& f, std::string_view var, const Expr& by) {
  if (!f.may_mention(var)) return f;
  return std::visit(
      overloaded{
          [&](const BoolConst&) { return f; },
          [&](const Rel& r) {
            auto l = subst(r.lhs, var, by);
            auto rr = subst(r.rhs, var, by);
            if (l.same_node(r.lhs) && rr.same_node(r.rhs)) return f;
            return Formula::rel(r.op, std::move(l), std::move(rr));
          },
          [&](const Not& n) {
            auto a = subst(n.arg, var, by);
            return a.same_node(n.arg) ? f : Formula::negation(std::move(a));
          },
          [&](const And& b) {
            auto l = subst(b.lhs, var, by);
            auto r = subst(b.rhs, var, by);
            return (l.same_node(b.lhs) && r.same_node(b.rhs)) ? f : Formula::conjunction(std::move(l), std::move(r));
          },
          [&](const Or& b) {
            auto l = subst(b.lhs, var, by);
            auto r = subst(b.rhs, var, by);
            return (l.same_node(b.lhs) && r.same_node(b.rhs)) ? f : Formula::disjunction(std::move(l), std::move(r));
          },
          [&](const Implies& b) {
            auto l = subst(b.lhs, var, by);
            auto r = subst(b.rhs, var, by);
            return (l.same_node(b.lhs) && r.same_node(b.rhs)) ? f : Formula::implication(std::move(l), std::move(r));
          },
          [&](const Forall& q) {
            auto body = subst(q.body, var, by);
            return body.same_node(q.body) ? f : Formula::forall(q.var, std::move(body));
          },
      },
      f.node());
}

RealExpr subst(const RealExpr& r, std::string_view var, const Expr& by) {
  if (!r.may_mention(var)) return r;
  return std::visit(overloaded{
                        [&](const Prob& p) {
                          auto phi = subst(p.phi, var, by);
                          return phi.same_node(p.phi) ? r : RealExpr::prob(std::move(phi));
                        },
                        [&](const RealBin& b) {
                          auto l = subst(b.lhs, var, by);
                          auto rr = subst(b.rhs, var, by);
                          if (l.same_node(b.lhs) && rr.same_node(b.rhs)) return r;
                          return RealExpr::binary(b.op, std::move(l), std::move(rr));
                        },
                        [&](const auto&) { return r; },
                    },
                    r.node());
}

}  // namespace phl
