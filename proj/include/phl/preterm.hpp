#pragma once

// Conditional terms, weakest preterms pt(C, r) and the lifted transformer
// WP(C, F) for probabilistic formulas.

#include <cstdint>
#include <vector>

#include "phl/ast.hpp"
#include "phl/config.hpp"
#include "phl/logic.hpp"

namespace phl {

/// r/B: every P(phi) inside r becomes P(phi && B).
RealExpr cond_term(const RealExpr& r, const Formula& guard);

enum class PasForm {
  /// Sum over nonempty outcome subsets T of (sum of a_i, i in T) times
  /// P(phi[X/k_i] for i in T, !phi[X/k_i] for the rest).
  subset_sum,
  /// sum_i a_i P(phi[X/k_i])
  linear,
};

enum class WhileSeriesForm {
  /// T_i = f^i(SUM), SUM = sum_i pt(IF^i, P(phi))/wp(i). Agrees with the
  /// semantics on every distribution.
  mass_linear,
  /// SUM and T_i carry the extra P(wp(i)) and prod_j f^j(P(wp(inf)))
  /// factors as originally stated. Kept for comparison only.
  as_published,
};

struct PtOptions {
  /// K: depth of the wp(i) family.
  int unroll = 32;
  /// D: number of series terms after T_0.
  int depth = 16;
  IntRange int_window{-8, 8};
  IntRange quant_window{-8, 8};
  PasForm pas = PasForm::subset_sum;
  WhileSeriesForm series = WhileSeriesForm::mass_linear;
  /// Largest outcome count built in subset-sum form; larger ones use the linear form.
  std::size_t max_subset_outcomes = 12;
  /// Series construction stops once a term exceeds this many nodes.
  std::uint64_t size_limit = 50000;
  /// Loop expansions allowed per pt call. Loops met after that keep only T_0
  /// restricted to the first exit class.
  int max_expansions = 16;

  static PtOptions from(const Config& cfg) {
    PtOptions o;
    o.unroll = cfg.unroll;
    o.depth = cfg.depth;
    o.int_window = cfg.int_window;
    o.quant_window = cfg.quant_window;
    return o;
  }
};

/// Expansion data for one while loop met during pt.
struct WhileExpansion {
  Formula guard = Formula::truth();
  /// Number of wp(i) computed minus one.
  int K = 0;
  /// Index of the last series term built.
  int D = 0;
  /// wp(i) for i = 0..K
  std::vector<Formula> wp_i;
  /// !wp(C^0, !B) && ... && !wp(C^K, !B)
  Formula wp_inf_K = Formula::truth();
  RealExpr sum_K = RealExpr::constant(0);
  /// T_0 .. T_D
  std::vector<RealExpr> t_terms;
  /// wp_inf_K is unsatisfiable on the window: the expansion is exact there.
  bool exhaustive = false;
  /// Series cut short by the size limit.
  bool size_limited = false;
  /// Expansion skipped because max_expansions was used up.
  bool budget_limited = false;
};

struct PtResult {
  RealExpr expr;
  std::vector<WhileExpansion> loops;
  /// Number of probabilistic assignments built in linear form because they
  /// had too many outcomes for the subset-sum form.
  int linear_fallbacks = 0;

  /// Every loop expansion was exhaustive on the window.
  bool exact() const;
};

/// pt(C, r). The window for exhaustiveness checks ranges over the program
/// variables of C and r.
PtResult pt(const Command& c, const RealExpr& r, const PtOptions& opts = {});

/// The value of r on the output of C from mu, computed by execution.
Rational pt_semantic_oracle(const Command& c, const RealExpr& r, const SubDistribution& mu,
                            const Interpretation& interp = {}, long loop_bound = 64, IntRange qwindow = {});

struct WppResult {
  ProbFormula formula;
  std::vector<WhileExpansion> loops;
  int linear_fallbacks = 0;

  bool exact() const;
};

/// WP(C, F): pt applied to both sides of every comparison; negation and
/// conjunction are kept, disjunction and implication are rewritten through
/// them.
WppResult wpp(const Command& c, const ProbFormula& f, const PtOptions& opts = {});

/// Family over the program variables in vars: Config window, seed and the
/// user-supplied members.
DistFamily default_family(const NameSet& vars, const Config& cfg, std::vector<SubDistribution> user = {});

/// Checks {pre} C {post} on every family member and every interpretation of
/// the free logical and real variables.
Verdict check_triple_prob(const ProbFormula& pre, const Command& c, const ProbFormula& post, const DistFamily& family,
                          const Config& cfg);

}  // namespace phl
