#include "phl/wp.hpp"

#include <algorithm>
#include <map>

#include "phl/interp.hpp"
#include "phl/simplify.hpp"

namespace phl {

bool WpResult::converged() const {
  return std::all_of(loops.begin(), loops.end(), [](const WpLoopTrace& t) { return t.converged; });
}

bool window_equivalent(const Formula& a, const Formula& b, const StateWindow& window, IntRange qwindow) {
  if (a == b) return true;
  NameSet logical = free_log_vars(a);
  logical.merge(free_log_vars(b));
  const auto interps = enumerate_interpretations(logical, {}, qwindow, {});
  for (const auto& s : window.states()) {
    for (const auto& i : interps) {
      if (sat_det(a, s, i, qwindow) != sat_det(b, s, i, qwindow)) return false;
    }
  }
  return true;
}

namespace {

class WpBuilder {
 public:
  WpBuilder(const WpOptions& opts, StateWindow window) : opts_(opts), window_(std::move(window)) {}

  Formula run(const Command& c, const Formula& phi) {
    return std::visit(overloaded{
                          [&](const Skip&) { return phi; },
                          [&](const Assign& a) { return subst_simplify(phi, a.var, a.value); },
                          [&](const PAssign& a) {
                            std::vector<Formula> parts;
                            for (const auto& e : a.dist.entries()) {
                              parts.push_back(subst_simplify(phi, a.var, Expr::constant(e.value)));
                            }
                            return mk_and_all(parts);
                          },
                          [&](const Seq& s) { return run(s.first, run(s.second, phi)); },
                          [&](const If& i) {
                            return mk_or(mk_and(i.guard, run(i.then_branch, phi)),
                                         mk_and(mk_not(i.guard), run(i.else_branch, phi)));
                          },
                          [&](const While& w) { return loop(w, phi); },
                      },
                      c.node());
  }

  std::vector<WpLoopTrace> traces;

 private:
  Formula loop(const While& w, const Formula& phi) {
    WpLoopTrace trace{w.guard, {Formula::truth()}, false, std::nullopt, false, false};
    const Formula exit = mk_and(mk_not(w.guard), phi);
    for (int i = 0; i < opts_.unroll; ++i) {
      const Formula next = mk_or(mk_and(w.guard, run(w.body, trace.psi.back())), exit);
      trace.psi.push_back(next);
      if (window_equivalent(next, trace.psi[trace.psi.size() - 2], window_, opts_.quant_window)) {
        trace.converged = true;
        trace.fixpoint_index = static_cast<int>(trace.psi.size()) - 1;
        break;
      }
      if (next.size() > opts_.size_limit) {
        trace.size_limited = true;
        break;
      }
    }
    trace.window_closed = closed(w);
    const Formula out = mk_and_all(trace.psi);
    traces.push_back(std::move(trace));
    return out;
  }

  bool closed(const While& w) {
    for (const auto& s : window_.states()) {
      if (!sat_det(w.guard, s)) continue;
      try {
        const auto r = exec(w.body, SubDistribution::point(s));
        if (!r.exact) return false;
        for (const auto& [t, p] : r.output.entries()) {
          if (!window_.contains(t)) return false;
        }
      } catch (const UnboundVariable&) {
        return false;
      }
    }
    return true;
  }

  WpOptions opts_;
  StateWindow window_;
};

}  // namespace

WpResult wp(const Command& c, const Formula& phi, const WpOptions& opts) {
  if (opts.unroll < 1) throw std::invalid_argument("unroll must be at least 1");
  NameSet vars;
  collect_prog_vars(c, vars);
  collect_prog_vars(phi, vars);
  WpBuilder b(opts, StateWindow(vars, opts.int_window));
  Formula f = b.run(c, phi);
  return WpResult{std::move(f), std::move(b.traces)};
}

Command wp_iterate_cmd(const Command& c, int i) {
  if (i < 0) throw std::invalid_argument("iteration count must be nonnegative");
  if (i == 0) return Command::skip();
  Command out = c;
  for (int k = 1; k < i; ++k) out = Command::seq(c, out);
  return out;
}

Verdict check_triple_det(const Formula& pre, const Command& c, const Formula& post, const StateWindow& window,
                         IntRange qwindow, long loop_bound) {
  Verdict v;
  v.scope = window.scope();
  NameSet logical = free_log_vars(pre);
  logical.merge(free_log_vars(post));
  const auto interps = enumerate_interpretations(logical, {}, qwindow, {});
  bool truncated = false;
  for (const auto& s : window.states()) {
    std::optional<ExecResult> run;
    for (const auto& i : interps) {
      if (!sat_det(pre, s, i, qwindow)) continue;
      if (!run) run = exec(c, SubDistribution::point(s), loop_bound);
      if (!run->output_final()) {
        truncated = true;
        v.residual = std::max(v.residual, run->residual_mass);
      }
      if (!sat_det_dist(post, run->output, i, qwindow)) {
        v.kind = Verdict::Kind::counterexample;
        v.state = s;
        v.interp = i;
        v.residual = Rational();
        return v;
      }
    }
  }
  if (truncated) v.kind = Verdict::Kind::holds_up_to_residual;
  return v;
}

Verdict check_triple_det(const Formula& pre, const Command& c, const Formula& post, const Config& cfg) {
  NameSet vars;
  collect_prog_vars(pre, vars);
  collect_prog_vars(c, vars);
  collect_prog_vars(post, vars);
  return check_triple_det(pre, c, post, StateWindow(vars, cfg.int_window), cfg.quant_window, cfg.loop_bound);
}

}  // namespace phl
