#pragma once

#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phl/numeric.hpp"

namespace phl {

/// Base of all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading a variable the state or interpretation does not cover.
class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name) : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Closed integer interval [lo, hi].
struct IntRange {
  long lo = -8;
  long hi = 8;

  bool empty() const { return lo > hi; }
  long count() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(const Integer& v) const { return Integer(lo) <= v && v <= Integer(hi); }
  /// "[lo,hi]"
  std::string to_string() const;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Deterministic state: a valuation of program variables.
class State {
 public:
  using Map = std::map<std::string, Integer, std::less<>>;

  State() = default;
  State(std::initializer_list<std::pair<const std::string, Integer>> init) : values_(init) {}
  explicit State(Map values) : values_(std::move(values)) {}

  const Integer* find(std::string_view var) const;
  /// Throws UnboundVariable.
  const Integer& at(std::string_view var) const;
  /// S[X |-> v]
  State with(std::string_view var, Integer value) const;
  /// Drops the variable, e.g. to marginalize a fresh desugaring variable.
  State without(std::string_view var) const;

  const Map& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// "{X=0, Y=1}"
  std::string to_string() const;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State& a, const State& b) { return a.values_ <=> b.values_; }

 private:
  Map values_;
};

/// Finite-support map State -> probability with total mass at most 1.
/// Zero entries are never stored, so equality is structural.
class SubDistribution {
 public:
  using Map = std::map<State, Rational>;

  SubDistribution() = default;
  /// Validates 0 < p <= 1 per entry (zeros dropped) and total mass <= 1;
  /// throws std::invalid_argument.
  explicit SubDistribution(const std::vector<std::pair<State, Rational>>& entries);

  static SubDistribution point(const State& s);
  static SubDistribution zero() { return {}; }

  Rational operator()(const State& s) const;
  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  std::vector<State> support() const;
  Rational total_mass() const;

  /// Adds mass to one state. Used while accumulating; the caller keeps the
  /// total mass within [0,1].
  void add(const State& s, const Rational& p);
  void add(const SubDistribution& other);
  void add_scaled(const SubDistribution& other, const Rational& factor);
  SubDistribution scaled(const Rational& factor) const;

  /// Marginalizes a variable away (sums the mass of states that agree elsewhere).
  SubDistribution without(std::string_view var) const;

  /// Checks the invariants; throws std::logic_error.
  void validate() const;

  friend bool operator==(const SubDistribution&, const SubDistribution&) = default;

 private:
  Map entries_;
};

inline SubDistribution point_dist(const State& s) { return SubDistribution::point(s); }
inline std::vector<State> support(const SubDistribution& mu) { return mu.support(); }

/// Valuation of logical (integer) variables and real variables.
struct Interpretation {
  std::map<std::string, Integer, std::less<>> logical;
  std::map<std::string, Rational, std::less<>> real;

  /// "{x=3, @p=1/2}"
  std::string to_string() const;
  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

}  // namespace phl
