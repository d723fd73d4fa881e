#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phl/state.hpp"

namespace phl {

/// Bounds shared by the checkers and the command line.
struct Config {
  long loop_bound = 64;
  /// K: unrolling depth for loop wp and the wp(i) family.
  int unroll = 32;
  /// D: series depth for the while preterm.
  int depth = 16;
  IntRange int_window{-8, 8};
  IntRange quant_window{-8, 8};
  std::uint64_t seed = 0;
  /// Values tried for free real variables.
  std::vector<Rational> real_grid = default_real_grid();

  static std::vector<Rational> default_real_grid();

  /// Overrides the fields present in a JSON object with keys loop_bound,
  /// unroll, depth, int_window ([lo,hi] or "lo..hi"), quant_window, seed,
  /// real_grid (list of "n/d"). Throws Error on malformed input.
  void merge_json(std::string_view text);

  /// Throws Error unless all bounds are >= 1 and the windows are nonempty.
  void validate() const;
};

/// "lo..hi", lo and hi optionally negative.
IntRange parse_range(std::string_view text);

}  // namespace phl
