#pragma once

// Proof derivations for both Hoare logics and their checker.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phl/ast.hpp"
#include "phl/config.hpp"
#include "phl/logic.hpp"
#include "phl/parser.hpp"

namespace phl {

enum class Rule { skip, as, pas, seq, if_, cons, and_, or_, while_ };

std::string_view to_string(Rule r);
/// Accepts the upper-case rule names ("SKIP", "AS", ...). Throws Error.
Rule parse_rule(std::string_view name);

struct Derivation {
  Rule rule = Rule::skip;
  SourceTriple conclusion;
  std::vector<Derivation> premises;
  /// Side conditions as written in the file. CONS checks its two
  /// implications whether or not they are listed here.
  std::vector<std::variant<Formula, ProbFormula>> side;
};

/// {"rule": "CONS", "conclusion": "<triple>", "premises": [...], "side": ["<formula>", ...]}.
/// Throws Error (ParseError for syntax errors inside strings).
Derivation parse_derivation_json(std::string_view text);
std::string to_json(const Derivation& d, int indent = 2);

struct ProofCheck {
  bool accepted = true;
  /// "on window ..." for PHL_d, "on family ..." for the probabilistic system.
  std::string scope;
  /// Path of the offending node, e.g. "root.premises[0]".
  std::string node;
  std::string reason;
  /// Nodes checked, in preorder.
  int nodes = 0;
  /// Side-condition counterexample, when that is the reason.
  std::optional<Verdict> counterexample;
  /// Remarks on how schema instances were matched.
  std::vector<std::string> notes;
};

/// Checks every node against its rule schema. The window covers the program
/// variables of the whole derivation over cfg.int_window; the probabilistic
/// family is built from that window and cfg.seed plus the user members.
ProofCheck check_derivation(const Derivation& d, const Config& cfg, const std::vector<SubDistribution>& user = {});

/// CONS over a derivation of {wp(C,psi)} C {psi} (or the WP analogue) built
/// by structural recursion on C.
Derivation canonical_derivation(const SourceTriple& t, const Config& cfg);

struct SoundnessFailure {
  Rule rule;
  std::string instance;
  std::string verdict;
};

struct SoundnessReport {
  /// Instances tried per PHL_d rule, indexed by Rule.
  std::vector<int> instances = std::vector<int>(9, 0);
  std::vector<SoundnessFailure> failures;
  int total() const;
};

/// Generates valid PHL_d rule instances (premises checked semantically) and
/// checks each concluded triple on the window. per_rule instances for every
/// rule; WHILE keeps drawing until it finds invariants, up to a cap.
SoundnessReport rule_soundness_suite(std::uint64_t seed, int per_rule, const Config& cfg);

}  // namespace phl
