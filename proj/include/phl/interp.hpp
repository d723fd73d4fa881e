#pragma once

// Exact denotational semantics over sub-distributions.

#include "phl/ast.hpp"
#include "phl/state.hpp"

namespace phl {

/// Throws UnboundVariable when a variable is not covered by S or I.
Integer eval_arith(const Expr& e, const State& s, const Interpretation& interp = {});

/// forall ranges over qwindow.
bool sat_det(const Formula& phi, const State& s, const Interpretation& interp = {}, IntRange qwindow = {});

/// Possibility semantics: every support state satisfies phi. Vacuous on the
/// zero distribution.
bool sat_det_dist(const Formula& phi, const SubDistribution& mu, const Interpretation& interp = {},
                  IntRange qwindow = {});

/// The restriction of mu to the states satisfying the program-level guard.
SubDistribution restrict(const SubDistribution& mu, const Formula& guard);

struct ExecResult {
  SubDistribution output;
  /// Mass still inside some loop when its bound was reached.
  Rational residual_mass;
  /// Largest number of body executions performed by a single loop run.
  long iterations_used = 0;
  /// residual_mass == 0
  bool exact = true;
  /// Every truncated loop had reached a live distribution that its body maps
  /// to itself, so further iterations would add nothing: output is the full
  /// denotation and residual_mass is diverging mass.
  bool stationary = false;

  /// output equals the untruncated semantics.
  bool output_final() const { return exact || stationary; }
};

inline constexpr long kDefaultLoopBound = 64;

/// Runs C on mu. Each while executes its body at most loop_bound times per
/// run. Throws UnboundVariable if a state lacks a variable C reads.
ExecResult exec(const Command& c, const SubDistribution& mu, long loop_bound = kDefaultLoopBound);

}  // namespace phl
