#pragma once

// The deterministic weakest-precondition transformer.

#include <cstdint>
#include <optional>
#include <vector>

#include "phl/ast.hpp"
#include "phl/config.hpp"
#include "phl/logic.hpp"

namespace phl {

/// psi_0 = true, psi_{i+1} = (B && wp(C, psi_i)) || (!B && phi) for one loop.
struct WpLoopTrace {
  Formula guard;
  std::vector<Formula> psi;
  /// Some psi_{k+1} is window-equivalent to psi_k.
  bool converged = false;
  /// k + 1 for the first such k.
  std::optional<int> fixpoint_index;
  /// Every guarded body run from a window state stays inside the window, so
  /// window-equivalence of consecutive psi implies the same for all later ones.
  bool window_closed = false;
  /// Iteration stopped because psi outgrew the size limit.
  bool size_limited = false;
};

struct WpResult {
  Formula formula;
  /// One entry per loop visited, in order of completion (inner loops first).
  std::vector<WpLoopTrace> loops;

  bool converged() const;
};

struct WpOptions {
  int unroll = 32;
  IntRange int_window{-8, 8};
  IntRange quant_window{-8, 8};
  /// Loop iteration stops once psi exceeds this many nodes.
  std::uint64_t size_limit = 200000;

  static WpOptions from(const Config& cfg) { return {cfg.unroll, cfg.int_window, cfg.quant_window}; }
};

/// wp(C, phi). Loops are unrolled until their psi sequence becomes stable on
/// the window over the program variables of C and phi, at most opts.unroll times.
WpResult wp(const Command& c, const Formula& phi, const WpOptions& opts = {});

/// C^i: skip for i = 0, otherwise i copies of C in sequence.
Command wp_iterate_cmd(const Command& c, int i);

/// Checks {phi} C {psi} from every window state over the program variables of
/// the triple and every interpretation of its free logical variables.
Verdict check_triple_det(const Formula& pre, const Command& c, const Formula& post, const Config& cfg);

/// Same as above on an explicit window.
Verdict check_triple_det(const Formula& pre, const Command& c, const Formula& post, const StateWindow& window,
                         IntRange qwindow, long loop_bound);

/// phi and psi agree on every window state and interpretation of their free
/// logical variables over qwindow.
bool window_equivalent(const Formula& a, const Formula& b, const StateWindow& window, IntRange qwindow);

}  // namespace phl
