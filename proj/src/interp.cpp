#include "phl/interp.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace phl {

Integer eval_arith(const Expr& e, const State& s, const Interpretation& interp) {
  return std::visit(overloaded{
                        [](const IntConst& c) { return c.value; },
                        [&](const ProgVar& v) { return s.at(v.name); },
                        [&](const LogVar& v) {
                          const auto it = interp.logical.find(v.name);
                          if (it == interp.logical.end()) throw UnboundVariable(v.name);
                          return it->second;
                        },
                        [&](const ArithBin& b) {
                          return apply(b.op, eval_arith(b.lhs, s, interp), eval_arith(b.rhs, s, interp));
                        },
                    },
                    e.node());
}

namespace {

bool sat(const Formula& phi, const State& s, Interpretation& interp, IntRange q) {
  return std::visit(overloaded{
                        [](const BoolConst& c) { return c.value; },
                        [&](const Rel& r) {
                          return apply(r.op, eval_arith(r.lhs, s, interp), eval_arith(r.rhs, s, interp));
                        },
                        [&](const Not& n) { return !sat(n.arg, s, interp, q); },
                        [&](const And& b) { return sat(b.lhs, s, interp, q) && sat(b.rhs, s, interp, q); },
                        [&](const Or& b) { return sat(b.lhs, s, interp, q) || sat(b.rhs, s, interp, q); },
                        [&](const Implies& b) { return !sat(b.lhs, s, interp, q) || sat(b.rhs, s, interp, q); },
                        [&](const Forall& f) {
                          auto it = interp.logical.find(f.var);
                          std::optional<Integer> saved;
                          if (it != interp.logical.end()) saved = it->second;
                          bool all = true;
                          for (long n = q.lo; n <= q.hi && all; ++n) {
                            interp.logical.insert_or_assign(f.var, Integer(n));
                            all = sat(f.body, s, interp, q);
                          }
                          if (saved) {
                            interp.logical.insert_or_assign(f.var, *saved);
                          } else {
                            interp.logical.erase(interp.logical.find(f.var));
                          }
                          return all;
                        },
                    },
                    phi.node());
}

}  // namespace

bool sat_det(const Formula& phi, const State& s, const Interpretation& interp, IntRange qwindow) {
  if (!phi.has_log_vars()) {
    Interpretation empty;
    return sat(phi, s, empty, qwindow);
  }
  Interpretation local = interp;
  return sat(phi, s, local, qwindow);
}

bool sat_det_dist(const Formula& phi, const SubDistribution& mu, const Interpretation& interp, IntRange qwindow) {
  return std::all_of(mu.entries().begin(), mu.entries().end(),
                     [&](const auto& e) { return sat_det(phi, e.first, interp, qwindow); });
}

SubDistribution restrict(const SubDistribution& mu, const Formula& guard) {
  if (!is_guard(guard)) throw std::invalid_argument("restriction by a formula with logical variables");
  SubDistribution out;
  for (const auto& [s, p] : mu.entries()) {
    if (sat_det(guard, s)) out.add(s, p);
  }
  return out;
}

namespace {

struct Runner {
  long bound;
  Rational residual;
  long max_iterations = 0;
  bool all_stationary = true;

  SubDistribution run(const Command& c, const SubDistribution& mu) {
    if (mu.empty()) return mu;
    return std::visit(overloaded{
                          [&](const Skip&) { return mu; },
                          [&](const Assign& a) {
                            SubDistribution out;
                            for (const auto& [s, p] : mu.entries()) out.add(s.with(a.var, eval_arith(a.value, s)), p);
                            return out;
                          },
                          [&](const PAssign& a) {
                            SubDistribution out;
                            for (const auto& [s, p] : mu.entries()) {
                              for (const auto& e : a.dist.entries()) out.add(s.with(a.var, e.value), p * e.weight);
                            }
                            return out;
                          },
                          [&](const Seq& s) { return run(s.second, run(s.first, mu)); },
                          [&](const If& i) {
                            SubDistribution yes;
                            SubDistribution no;
                            for (const auto& [s, p] : mu.entries()) (sat_det(i.guard, s) ? yes : no).add(s, p);
                            SubDistribution out = run(i.then_branch, yes);
                            out.add(run(i.else_branch, no));
                            return out;
                          },
                          [&](const While& w) { return loop(w, mu); },
                      },
                      c.node());
  }

  SubDistribution loop(const While& w, const SubDistribution& mu) {
    SubDistribution out;
    SubDistribution current = mu;
    long i = 0;
    while (true) {
      SubDistribution live;
      for (const auto& [s, p] : current.entries()) (sat_det(w.guard, s) ? live : out).add(s, p);
      if (live.empty()) break;
      if (i == bound) {
        residual += live.total_mass();
        // Stationary when one more pass reproduces the live part exactly.
        Runner probe{bound, Rational(), 0, true};
        const SubDistribution next = probe.run(w.body, live);
        if (!(next == live && probe.residual.is_zero())) all_stationary = false;
        break;
      }
      current = run(w.body, live);
      ++i;
    }
    max_iterations = std::max(max_iterations, i);
    return out;
  }
};

}  // namespace

ExecResult exec(const Command& c, const SubDistribution& mu, long loop_bound) {
  if (loop_bound < 0) throw std::invalid_argument("loop bound must be nonnegative");
  Runner r{loop_bound, Rational(), 0, true};
  ExecResult res;
  res.output = r.run(c, mu);
  res.residual_mass = r.residual;
  res.iterations_used = r.max_iterations;
  res.exact = r.residual.is_zero();
  res.stationary = !res.exact && r.all_stationary;
  return res;
}

}  // namespace phl
