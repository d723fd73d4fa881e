#pragma once

// Real expressions and probabilistic formulas over sub-distributions, plus
// validity checking relative to a finite window of states or a finite family
// of distributions.

#include <initializer_list>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phl/ast.hpp"
#include "phl/config.hpp"
#include "phl/state.hpp"

namespace phl {

Rational eval_real(const RealExpr& r, const SubDistribution& mu, const Interpretation& interp = {},
                   IntRange qwindow = {});

bool sat_prob(const ProbFormula& f, const SubDistribution& mu, const Interpretation& interp = {},
              IntRange qwindow = {});

/// Every state over vars with each value in range, in lexicographic order.
class StateWindow {
 public:
  StateWindow(std::vector<std::string> vars, IntRange range);
  StateWindow(const NameSet& vars, IntRange range) : StateWindow(std::vector<std::string>(vars.begin(), vars.end()), range) {}
  StateWindow(std::initializer_list<std::string> vars, IntRange range) : StateWindow(std::vector<std::string>(vars), range) {}

  const std::vector<std::string>& vars() const { return vars_; }
  IntRange range() const { return range_; }
  const std::vector<State>& states() const { return states_; }
  bool contains(const State& s) const;

  /// "on window [-8,8]^{X,Y}"
  std::string scope() const;

 private:
  std::vector<std::string> vars_;
  IntRange range_;
  std::vector<State> states_;
};

/// Finite stand-in for "all distributions": point distributions over a
/// window, user-supplied members, seeded random mixtures, the zero
/// distribution and one distribution of mass 1/2.
class DistFamily {
 public:
  static constexpr int kDefaultMixtures = 32;

  DistFamily(const StateWindow& window, std::uint64_t seed, std::vector<SubDistribution> user = {},
             int mixtures = kDefaultMixtures);

  const std::vector<SubDistribution>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::uint64_t seed() const { return seed_; }

  /// "on family seed=0, size=N"
  std::string scope() const;

 private:
  std::uint64_t seed_;
  std::vector<SubDistribution> members_;
};

/// All interpretations of the given logical variables over qwindow and real
/// variables over the grid, in lexicographic order. One empty
/// interpretation when both sets are empty.
std::vector<Interpretation> enumerate_interpretations(const NameSet& logical, const NameSet& real, IntRange qwindow,
                                                      const std::vector<Rational>& grid);

struct Verdict {
  enum class Kind { holds, holds_up_to_residual, counterexample };

  Kind kind = Kind::holds;
  /// "on window ..." or "on family ..."
  std::string scope;
  std::optional<State> state;
  std::optional<SubDistribution> dist;
  std::optional<Interpretation> interp;
  /// Largest residual mass met while executing, when kind is holds_up_to_residual.
  Rational residual;
  std::string detail;

  bool ok() const { return kind != Kind::counterexample; }
  /// One line, e.g. "holds on window [-8,8]^{X}".
  std::string summary() const;
};

std::string_view to_string(Verdict::Kind k);

/// Checks phi on every window state and every interpretation of its free
/// logical variables over qwindow.
Verdict check_valid_det(const Formula& phi, const StateWindow& window, IntRange qwindow);

/// Checks f on every family member and every interpretation of its free
/// logical and real variables.
Verdict check_valid_prob(const ProbFormula& f, const DistFamily& family, const Config& cfg);

/// Reads one distribution (a JSON list of {"state": {...}, "prob": "n/d"})
/// or several (a list of such lists). Throws Error.
std::vector<SubDistribution> parse_distributions_json(std::string_view text);

}  // namespace phl
