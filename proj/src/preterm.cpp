#include "phl/preterm.hpp"

#include <algorithm>
#include <unordered_map>

#include "phl/interp.hpp"
#include "phl/simplify.hpp"
#include "phl/wp.hpp"

namespace phl {

RealExpr cond_term(const RealExpr& r, const Formula& guard) {
  return std::visit(overloaded{
                        [&](const RatConst&) { return r; },
                        [&](const RealVar&) { return r; },
                        [&](const Prob& p) { return mk_prob(mk_and(p.phi, guard)); },
                        [&](const RealBin& b) {
                          return mk_real(b.op, cond_term(b.lhs, guard), cond_term(b.rhs, guard));
                        },
                    },
                    r.node());
}

bool PtResult::exact() const {
  return std::all_of(loops.begin(), loops.end(), [](const WhileExpansion& e) { return e.exhaustive; });
}

bool WppResult::exact() const {
  return std::all_of(loops.begin(), loops.end(), [](const WhileExpansion& e) { return e.exhaustive; });
}

namespace {

RealExpr sum_of(const std::vector<RealExpr>& terms) {
  RealExpr out = RealExpr::constant(0);
  for (const auto& t : terms) out = mk_real(ArithOp::add, out, t);
  return out;
}

class PtBuilder {
 public:
  PtBuilder(const PtOptions& opts, StateWindow window) : opts_(opts), window_(std::move(window)) {}

  RealExpr pt(const Command& c, const RealExpr& r) {
    return std::visit(overloaded{
                          [&](const RatConst&) { return r; },
                          [&](const RealVar&) { return r; },
                          [&](const Prob& p) { return pt_prob(c, p.phi); },
                          [&](const RealBin& b) { return mk_real(b.op, pt(c, b.lhs), pt(c, b.rhs)); },
                      },
                      r.node());
  }

  std::vector<WhileExpansion> loops;
  int linear_fallbacks = 0;

 private:
  RealExpr pt_prob(const Command& c, const Formula& phi) {
    const auto key = std::make_pair(c.id(), phi.hash());
    auto [lo, hi] = cache_.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (it->second.first == phi) return it->second.second;
    }
    RealExpr out = std::visit(overloaded{
                                  [&](const Skip&) { return mk_prob(phi); },
                                  [&](const Assign& a) { return mk_prob(subst_simplify(phi, a.var, a.value)); },
                                  [&](const PAssign& a) { return pas(a, phi); },
                                  [&](const Seq& s) { return pt(s.first, pt_prob(s.second, phi)); },
                                  [&](const If& i) {
                                    return mk_real(ArithOp::add, cond_term(pt_prob(i.then_branch, phi), i.guard),
                                                   cond_term(pt_prob(i.else_branch, phi), mk_not(i.guard)));
                                  },
                                  [&](const While& w) { return series(w, phi); },
                              },
                              c.node());
    cache_.emplace(key, std::make_pair(phi, out));
    return out;
  }

  RealExpr pas(const PAssign& a, const Formula& phi) {
    const auto& entries = a.dist.entries();
    const std::size_t n = entries.size();
    std::vector<Formula> inst;
    for (const auto& e : entries) inst.push_back(subst_simplify(phi, a.var, Expr::constant(e.value)));

    if (opts_.pas == PasForm::linear || n > opts_.max_subset_outcomes) {
      if (opts_.pas == PasForm::subset_sum) ++linear_fallbacks;
      std::vector<RealExpr> terms;
      for (std::size_t i = 0; i < n; ++i) {
        terms.push_back(mk_real(ArithOp::mul, RealExpr::constant(entries[i].weight), mk_prob(inst[i])));
      }
      return sum_of(terms);
    }

    // Nonempty subsets by size, then lexicographically.
    std::vector<RealExpr> terms;
    for (std::size_t size = 1; size <= n; ++size) {
      std::vector<std::size_t> idx(size);
      for (std::size_t k = 0; k < size; ++k) idx[k] = k;
      while (true) {
        std::vector<bool> in(n, false);
        Rational coef;
        for (const auto k : idx) {
          in[k] = true;
          coef += entries[k].weight;
        }
        std::vector<Formula> parts;
        for (std::size_t k = 0; k < n; ++k) {
          if (in[k]) parts.push_back(inst[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
          if (!in[k]) parts.push_back(mk_not(inst[k]));
        }
        terms.push_back(mk_real(ArithOp::mul, RealExpr::constant(coef), mk_prob(mk_and_all(parts))));
        // next combination
        std::size_t k = size;
        while (k > 0 && idx[k - 1] == n - size + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    return sum_of(terms);
  }

  bool satisfiable_on_window(const Formula& f) const {
    return std::any_of(window_.states().begin(), window_.states().end(),
                       [&](const State& s) { return sat_det(f, s); });
  }

  // pt(if B then C else skip, r)
  RealExpr pt_if(const While& w, const RealExpr& r) {
    return mk_real(ArithOp::add, cond_term(pt(w.body, r), w.guard), cond_term(r, mk_not(w.guard)));
  }

  RealExpr series(const While& w, const Formula& phi) {
    WhileExpansion ex;
    ex.guard = w.guard;
    WpOptions wopts;
    wopts.unroll = opts_.unroll;
    wopts.int_window = opts_.int_window;
    wopts.quant_window = opts_.quant_window;
    wopts.size_limit = opts_.size_limit;

    const bool published = opts_.series == WhileSeriesForm::as_published;
    if (++expansions_ > opts_.max_expansions) {
      const Formula exit0 = mk_not(w.guard);
      ex.wp_i.push_back(exit0);
      ex.wp_inf_K = w.guard;
      ex.exhaustive = !satisfiable_on_window(w.guard);
      ex.budget_limited = !ex.exhaustive;
      const RealExpr q0 = mk_prob(phi);
      ex.sum_K = published ? mk_real(ArithOp::mul, mk_prob(exit0), cond_term(q0, exit0)) : cond_term(q0, exit0);
      ex.t_terms.push_back(ex.sum_K);
      RealExpr out = ex.sum_K;
      loops.push_back(std::move(ex));
      return out;
    }
    Formula w_i = mk_not(w.guard);  // wp(C^0, !B)
    ex.wp_i.push_back(w_i);
    Formula inf = mk_not(w_i);
    RealExpr q = mk_prob(phi);      // pt(IF^0, P(phi))
    std::vector<RealExpr> sum_terms{published ? mk_real(ArithOp::mul, mk_prob(w_i), cond_term(q, w_i))
                                              : cond_term(q, w_i)};
    ex.exhaustive = !satisfiable_on_window(inf);
    int i = 0;
    while (!ex.exhaustive && i < opts_.unroll) {
      ++i;
      w_i = wp(w.body, w_i, wopts).formula;
      const Formula wp_exact = mk_and(inf, w_i);
      inf = mk_and(inf, mk_not(w_i));
      q = normalize(pt_if(w, q));
      ex.wp_i.push_back(wp_exact);
      sum_terms.push_back(published ? mk_real(ArithOp::mul, mk_prob(wp_exact), cond_term(q, wp_exact))
                                    : cond_term(q, wp_exact));
      ex.exhaustive = !satisfiable_on_window(inf);
      if (q.size() > opts_.size_limit || inf.size() > opts_.size_limit) {
        ex.size_limited = true;
        break;
      }
    }
    ex.K = i;
    ex.wp_inf_K = inf;
    ex.sum_K = normalize(sum_of(sum_terms));
    ex.t_terms.push_back(ex.sum_K);

    if (!ex.exhaustive && !ex.size_limited) {
      RealExpr f_sum = ex.sum_K;
      RealExpr f_inf = mk_prob(inf);  // f^j(P(wp(inf)))
      RealExpr prod = RealExpr::constant(1);
      for (int d = 1; d <= opts_.depth; ++d) {
        f_sum = normalize(cond_term(pt(w.body, f_sum), inf));
        if (published) {
          prod = normalize(mk_real(ArithOp::mul, prod, f_inf));
          f_inf = normalize(cond_term(pt(w.body, f_inf), inf));
          ex.t_terms.push_back(normalize(mk_real(ArithOp::mul, f_sum, prod)));
        } else {
          ex.t_terms.push_back(f_sum);
        }
        if (ex.t_terms.back().size() > opts_.size_limit || prod.size() > opts_.size_limit) {
          ex.size_limited = true;
          break;
        }
      }
    }
    ex.D = static_cast<int>(ex.t_terms.size()) - 1;
    RealExpr out = normalize(sum_of(ex.t_terms));
    loops.push_back(std::move(ex));
    return out;
  }

  PtOptions opts_;
  StateWindow window_;
  struct KeyHash {
    std::size_t operator()(const std::pair<const void*, std::size_t>& k) const {
      return std::hash<const void*>()(k.first) ^ (k.second * 0x9e3779b97f4a7c15ULL);
    }
  };
  int expansions_ = 0;
  std::unordered_multimap<std::pair<const void*, std::size_t>, std::pair<Formula, RealExpr>, KeyHash> cache_;
};

NameSet vars_of(const Command& c) {
  NameSet v;
  collect_prog_vars(c, v);
  return v;
}

}  // namespace

PtResult pt(const Command& c, const RealExpr& r, const PtOptions& opts) {
  if (opts.unroll < 1 || opts.depth < 1) throw std::invalid_argument("unroll and depth must be at least 1");
  NameSet vars = vars_of(c);
  collect_prog_vars(r, vars);
  PtBuilder b(opts, StateWindow(vars, opts.int_window));
  RealExpr out = normalize(b.pt(c, r));
  return PtResult{std::move(out), std::move(b.loops), b.linear_fallbacks};
}

Rational pt_semantic_oracle(const Command& c, const RealExpr& r, const SubDistribution& mu,
                            const Interpretation& interp, long loop_bound, IntRange qwindow) {
  return eval_real(r, exec(c, mu, loop_bound).output, interp, qwindow);
}

WppResult wpp(const Command& c, const ProbFormula& f, const PtOptions& opts) {
  if (opts.unroll < 1 || opts.depth < 1) throw std::invalid_argument("unroll and depth must be at least 1");
  NameSet vars = vars_of(c);
  collect_prog_vars(f, vars);
  PtBuilder b(opts, StateWindow(vars, opts.int_window));
  auto go = [&](auto&& self, const ProbFormula& g) -> ProbFormula {
    return std::visit(overloaded{
                          [&](const PConst&) { return g; },
                          [&](const PRel& r) {
                            return mk_prel(r.op, normalize(b.pt(c, r.lhs)), normalize(b.pt(c, r.rhs)));
                          },
                          [&](const PNot& n) { return mk_pnot(self(self, n.arg)); },
                          [&](const PAnd& a) { return mk_pand(self(self, a.lhs), self(self, a.rhs)); },
                          [&](const POr& o) {
                            return mk_pnot(mk_pand(mk_pnot(self(self, o.lhs)), mk_pnot(self(self, o.rhs))));
                          },
                          [&](const PImplies& i) {
                            return mk_pnot(mk_pand(self(self, i.lhs), mk_pnot(self(self, i.rhs))));
                          },
                      },
                      g.node());
  };
  ProbFormula out = go(go, f);
  return WppResult{std::move(out), std::move(b.loops), b.linear_fallbacks};
}

DistFamily default_family(const NameSet& vars, const Config& cfg, std::vector<SubDistribution> user) {
  return DistFamily(StateWindow(vars, cfg.int_window), cfg.seed, std::move(user));
}

Verdict check_triple_prob(const ProbFormula& pre, const Command& c, const ProbFormula& post, const DistFamily& family,
                          const Config& cfg) {
  Verdict v;
  v.scope = family.scope();
  NameSet logical = free_log_vars(pre);
  logical.merge(free_log_vars(post));
  NameSet reals = real_vars(pre);
  reals.merge(real_vars(post));
  const auto interps = enumerate_interpretations(logical, reals, cfg.quant_window, cfg.real_grid);
  bool truncated = false;
  for (const auto& mu : family.members()) {
    std::optional<ExecResult> run;
    for (const auto& i : interps) {
      if (!sat_prob(pre, mu, i, cfg.quant_window)) continue;
      if (!run) run = exec(c, mu, cfg.loop_bound);
      if (!run->output_final()) {
        truncated = true;
        v.residual = std::max(v.residual, run->residual_mass);
      }
      if (!sat_prob(post, run->output, i, cfg.quant_window)) {
        v.kind = Verdict::Kind::counterexample;
        v.dist = mu;
        v.interp = i;
        if (!run->output_final()) {
          v.detail = "execution truncated with residual mass " + run->residual_mass.to_string();
          v.residual = run->residual_mass;
        } else {
          v.residual = Rational();
        }
        return v;
      }
    }
  }
  if (truncated) v.kind = Verdict::Kind::holds_up_to_residual;
  return v;
}

}  // namespace phl
