#include "phl/generate.hpp"

#include <algorithm>

namespace phl {

Generator::Generator(std::uint64_t seed, GenOptions opts) : opts_(std::move(opts)), rng_(seed) {
  if (opts_.vars.empty()) throw std::invalid_argument("generator needs at least one program variable");
  if (opts_.window.empty()) throw std::invalid_argument("generator window is empty");
}

std::size_t Generator::pick(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }

long Generator::between(long lo, long hi) { return lo + static_cast<long>(pick(static_cast<std::size_t>(hi - lo + 1))); }

bool Generator::chance(int percent) { return static_cast<int>(pick(100)) < percent; }

Expr Generator::expr(int depth, bool logical) {
  const auto leaf = [&]() {
    if (logical && !opts_.log_vars.empty() && chance(35)) {
      return Expr::log_var(opts_.log_vars[pick(opts_.log_vars.size())]);
    }
    if (chance(60)) return Expr::prog_var(opts_.vars[pick(opts_.vars.size())]);
    return Expr::constant(between(opts_.window.lo, opts_.window.hi));
  };
  if (depth <= 0 || chance(45)) return leaf();
  switch (pick(4)) {
    case 0:
      return Expr::binary(ArithOp::add, expr(depth - 1, logical), expr(depth - 1, logical));
    case 1:
      return Expr::binary(ArithOp::sub, expr(depth - 1, logical), expr(depth - 1, logical));
    case 2:
      return Expr::binary(ArithOp::mul, Expr::constant(between(-2, 2)), expr(depth - 1, logical));
    default:
      return Expr::binary(ArithOp::add, expr(depth - 1, logical), Expr::constant(between(-1, 1)));
  }
}

Formula Generator::atom(bool logical) {
  static constexpr RelOp kOps[] = {RelOp::lt, RelOp::le, RelOp::eq, RelOp::ge, RelOp::gt};
  if (chance(4)) return Formula::constant(chance(50));
  return Formula::rel(kOps[pick(5)], expr(1, logical), expr(1, logical));
}

Formula Generator::formula_at(int depth, bool logical) {
  if (depth <= 0 || chance(30)) return atom(logical);
  const int k = static_cast<int>(pick(opts_.quantifiers && !logical && !opts_.log_vars.empty() ? 6 : 5));
  switch (k) {
    case 0:
      return Formula::negation(formula_at(depth - 1, logical));
    case 1:
      return Formula::conjunction(formula_at(depth - 1, logical), formula_at(depth - 1, logical));
    case 2:
      return Formula::disjunction(formula_at(depth - 1, logical), formula_at(depth - 1, logical));
    case 3:
      return Formula::implication(formula_at(depth - 1, logical), formula_at(depth - 1, logical));
    case 4:
      return Formula::conjunction(atom(logical), formula_at(depth - 1, logical));
    default: {
      const auto& x = opts_.log_vars[pick(opts_.log_vars.size())];
      return Formula::forall(x, formula_at(depth - 1, true));
    }
  }
}

Formula Generator::guard(int depth) {
  const bool q = opts_.quantifiers;
  opts_.quantifiers = false;
  Formula g = formula_at(depth, false);
  opts_.quantifiers = q;
  return g;
}

Formula Generator::formula(int depth) { return formula_at(depth, false); }

RealExpr Generator::real_expr(int depth) {
  static const Rational kConsts[] = {Rational(0), Rational(1), Rational(2), Rational(1, 2), Rational(1, 3),
                                     Rational(2, 3), Rational(-1)};
  const auto leaf = [&]() {
    const auto k = pick(10);
    if (k < 6) return RealExpr::prob(guard(1));
    if (k < 7 && opts_.real_vars) return RealExpr::var(chance(50) ? "a" : "b");
    return RealExpr::constant(kConsts[pick(std::size(kConsts))]);
  };
  if (depth <= 0 || chance(35)) return leaf();
  switch (pick(4)) {
    case 0:
    case 1:
      return RealExpr::binary(ArithOp::add, real_expr(depth - 1), real_expr(depth - 1));
    case 2:
      return RealExpr::binary(ArithOp::sub, real_expr(depth - 1), real_expr(depth - 1));
    default:
      return RealExpr::binary(ArithOp::mul, real_expr(depth - 1), real_expr(depth - 1));
  }
}

ProbFormula Generator::prob_formula(int depth) {
  static constexpr RelOp kOps[] = {RelOp::lt, RelOp::le, RelOp::eq, RelOp::ge, RelOp::gt};
  if (depth <= 0 || chance(40)) return ProbFormula::rel(kOps[pick(5)], real_expr(1), real_expr(1));
  switch (pick(4)) {
    case 0:
      return ProbFormula::negation(prob_formula(depth - 1));
    case 1:
      return ProbFormula::conjunction(prob_formula(depth - 1), prob_formula(depth - 1));
    case 2:
      return ProbFormula::disjunction(prob_formula(depth - 1), prob_formula(depth - 1));
    default:
      return ProbFormula::implication(prob_formula(depth - 1), prob_formula(depth - 1));
  }
}

DistSpec Generator::dist_spec(std::size_t outcomes) {
  std::vector<long> values;
  for (long v = opts_.window.lo; v <= opts_.window.hi; ++v) values.push_back(v);
  outcomes = std::clamp<std::size_t>(outcomes, 1, values.size());
  std::shuffle(values.begin(), values.end(), rng_);
  std::vector<long> weights;
  long total = 0;
  for (std::size_t i = 0; i < outcomes; ++i) {
    weights.push_back(between(1, 4));
    total += weights.back();
  }
  std::vector<DistSpec::Entry> entries;
  for (std::size_t i = 0; i < outcomes; ++i) entries.push_back({Rational(weights[i], total), values[i]});
  return DistSpec(std::move(entries));
}

Command Generator::assignment() {
  const auto& v = opts_.vars[pick(opts_.vars.size())];
  const auto& w = opts_.vars[pick(opts_.vars.size())];
  const long lo = opts_.window.lo;
  const long hi = opts_.window.hi;
  if (opts_.probabilistic && chance(30)) return Command::passign(v, dist_spec(1 + pick(opts_.max_outcomes)));
  if (!opts_.closed) return Command::assign(v, expr(2));
  const Expr x = Expr::prog_var(v);
  switch (pick(5)) {
    case 0:
      return Command::assign(v, Expr::constant(between(lo, hi)));
    case 1:
      return Command::assign(v, Expr::prog_var(w));
    case 2:  // increment with wrap-around
      return Command::if_then_else(Formula::rel(RelOp::lt, x, Expr::constant(hi)),
                                   Command::assign(v, Expr::binary(ArithOp::add, x, Expr::constant(1))),
                                   Command::assign(v, Expr::constant(lo)));
    case 3:  // decrement with wrap-around
      return Command::if_then_else(Formula::rel(RelOp::gt, x, Expr::constant(lo)),
                                   Command::assign(v, Expr::binary(ArithOp::sub, x, Expr::constant(1))),
                                   Command::assign(v, Expr::constant(hi)));
    default: {  // arbitrary value, clamped back into the window
      const Expr e = expr(2);
      const Formula inside = Formula::conjunction(Formula::rel(RelOp::le, Expr::constant(lo), e),
                                                  Formula::rel(RelOp::le, e, Expr::constant(hi)));
      return Command::if_then_else(inside, Command::assign(v, e), Command::assign(v, Expr::constant(between(lo, hi))));
    }
  }
}

Command Generator::loop_free(int depth) {
  if (depth <= 0 || chance(30)) return chance(8) ? Command::skip() : assignment();
  switch (pick(3)) {
    case 0:
    case 1:
      return Command::seq(loop_free(depth - 1), loop_free(depth - 1));
    default:
      return Command::if_then_else(guard(1), loop_free(depth - 1), loop_free(depth - 1));
  }
}

Command Generator::while_loop(int body_depth) { return Command::while_do(guard(1), loop_free(body_depth)); }

Command Generator::command(int depth) {
  if (!opts_.loops) return loop_free(depth);
  if (depth <= 0 || chance(25)) return chance(8) ? Command::skip() : assignment();
  switch (pick(5)) {
    case 0:
    case 1:
      return Command::seq(command(depth - 1), command(depth - 1));
    case 2:
      return Command::if_then_else(guard(1), command(depth - 1), command(depth - 1));
    default:
      return Command::while_do(guard(1), chance(80) ? loop_free(depth - 1) : command(depth - 1));
  }
}

State Generator::state() {
  State s;
  for (const auto& v : opts_.vars) s = s.with(v, between(opts_.window.lo, opts_.window.hi));
  return s;
}

SubDistribution Generator::distribution() {
  const std::size_t n = 1 + pick(4);
  std::vector<std::pair<State, long>> picks;
  long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    picks.emplace_back(state(), between(1, 6));
    total += picks.back().second;
  }
  // Scale the mass down to k/4 for about a third of the draws.
  const long quarters = chance(35) ? between(1, 3) : 4;
  SubDistribution mu;
  for (const auto& [s, w] : picks) mu.add(s, Rational(w * quarters, total * 4));
  return mu;
}

}  // namespace phl
