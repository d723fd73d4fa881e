#pragma once

// Seeded random generators for ASTs, programs and distributions, used by the
// property suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "phl/ast.hpp"
#include "phl/state.hpp"

namespace phl {

struct GenOptions {
  std::vector<std::string> vars{"X", "Y"};
  IntRange window{-2, 2};
  /// Logical variable names available to forall.
  std::vector<std::string> log_vars{"x"};
  bool quantifiers = true;
  /// Allow @a, @b in real expressions.
  bool real_vars = false;
  bool loops = true;
  bool probabilistic = true;
  /// Commands map window states to window states.
  bool closed = true;
  std::size_t max_outcomes = 3;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed, GenOptions opts = {});

  const GenOptions& options() const { return opts_; }

  /// Uniform in [0, n).
  std::size_t pick(std::size_t n);
  long between(long lo, long hi);
  bool chance(int percent);

  Expr expr(int depth, bool logical = false);
  /// Quantifier-free and program-level.
  Formula guard(int depth);
  Formula formula(int depth);
  RealExpr real_expr(int depth);
  ProbFormula prob_formula(int depth);

  /// Outcome values inside the window.
  DistSpec dist_spec(std::size_t outcomes);
  Command assignment();
  Command command(int depth);
  Command loop_free(int depth);
  Command while_loop(int body_depth);

  State state();
  SubDistribution distribution();

 private:
  Formula atom(bool logical);
  Formula formula_at(int depth, bool logical);

  GenOptions opts_;
  std::mt19937_64 rng_;
};

}  // namespace phl
