#pragma once

// Abstract syntax of the probabilistic while-language and of its two
// assertion languages. All trees are immutable and share subtrees freely;
// every node caches a structural hash, its tree size and a bloom mask of the
// program variables below it.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "phl/numeric.hpp"

namespace phl {

enum class ArithOp { add, sub, mul };
enum class RelOp { lt, le, eq, ge, gt };

std::string_view symbol(ArithOp op);
std::string_view symbol(RelOp op);

Integer apply(ArithOp op, const Integer& a, const Integer& b);
Rational apply(ArithOp op, const Rational& a, const Rational& b);

template <class T>
bool apply(RelOp op, const T& a, const T& b) {
  switch (op) {
    case RelOp::lt: return a < b;
    case RelOp::le: return a <= b;
    case RelOp::eq: return a == b;
    case RelOp::ge: return a >= b;
    case RelOp::gt: return a > b;
  }
  return false;
}

/// Bit used for a program variable in the per-node variable mask.
std::uint64_t var_bit(std::string_view name);

namespace detail {

template <class Node>
struct TreeImpl {
  Node node;
  std::size_t hash = 0;
  std::uint64_t size = 1;
  std::uint64_t prog_mask = 0;
  bool has_log = false;
};

template <class Node>
class Handle {
 public:
  const Node& node() const { return impl_->node; }
  template <class T>
  const T* as() const { return std::get_if<T>(&impl_->node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(impl_->node); }

  std::size_t hash() const { return impl_->hash; }
  /// Tree size (shared subtrees counted once per occurrence), saturating.
  std::uint64_t size() const { return impl_->size; }
  std::uint64_t prog_mask() const { return impl_->prog_mask; }
  /// False only if the program variable certainly does not occur.
  bool may_mention(std::string_view prog_var) const { return (impl_->prog_mask & var_bit(prog_var)) != 0; }
  /// Contains a logical variable or a quantifier.
  bool has_log_vars() const { return impl_->has_log; }
  bool same_node(const Handle& o) const { return impl_ == o.impl_; }
  /// Identity of the shared node, usable as a memo key while the handle lives.
  const void* id() const { return impl_.get(); }

 protected:
  explicit Handle(std::shared_ptr<const TreeImpl<Node>> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const TreeImpl<Node>> impl_;
};

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max() / 4;
  return (a > cap || b > cap || a + b > cap) ? cap : a + b;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Arithmetic expressions: n | X | x | e aop e

struct IntConst;
struct ProgVar;
struct LogVar;
struct ArithBin;
using ExprNode = std::variant<IntConst, ProgVar, LogVar, ArithBin>;

class Expr : public detail::Handle<ExprNode> {
 public:
  static Expr constant(Integer value);
  static Expr prog_var(std::string name);
  static Expr log_var(std::string name);
  static Expr binary(ArithOp op, Expr lhs, Expr rhs);

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  using Handle::Handle;
};

struct IntConst {
  Integer value;
  friend bool operator==(const IntConst&, const IntConst&) = default;
};
struct ProgVar {
  std::string name;
  friend bool operator==(const ProgVar&, const ProgVar&) = default;
};
struct LogVar {
  std::string name;
  friend bool operator==(const LogVar&, const LogVar&) = default;
};
struct ArithBin {
  ArithOp op;
  Expr lhs;
  Expr rhs;
  friend bool operator==(const ArithBin&, const ArithBin&) = default;
};

// ---------------------------------------------------------------------------
// Deterministic formulas. Program guards are the quantifier- and
// logical-variable-free fragment.

struct BoolConst;
struct Rel;
struct Not;
struct And;
struct Or;
struct Implies;
struct Forall;
using FormulaNode = std::variant<BoolConst, Rel, Not, And, Or, Implies, Forall>;

class Formula : public detail::Handle<FormulaNode> {
 public:
  static Formula truth();
  static Formula falsity();
  static Formula constant(bool value);
  static Formula rel(RelOp op, Expr lhs, Expr rhs);
  static Formula negation(Formula arg);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);

  /// No logical variables and no quantifiers: usable as a command guard.
  bool is_program_level() const { return !has_log_vars(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  using Handle::Handle;
};

struct BoolConst {
  bool value;
  friend bool operator==(const BoolConst&, const BoolConst&) = default;
};
struct Rel {
  RelOp op;
  Expr lhs;
  Expr rhs;
  friend bool operator==(const Rel&, const Rel&) = default;
};
struct Not {
  Formula arg;
  friend bool operator==(const Not&, const Not&) = default;
};
struct And {
  Formula lhs;
  Formula rhs;
  friend bool operator==(const And&, const And&) = default;
};
struct Or {
  Formula lhs;
  Formula rhs;
  friend bool operator==(const Or&, const Or&) = default;
};
struct Implies {
  Formula lhs;
  Formula rhs;
  friend bool operator==(const Implies&, const Implies&) = default;
};
struct Forall {
  std::string var;
  Formula body;
  friend bool operator==(const Forall&, const Forall&) = default;
};

// ---------------------------------------------------------------------------
// Real expressions: a | @x | P(phi) | r aop r

struct RatConst;
struct RealVar;
struct Prob;
struct RealBin;
using RealNode = std::variant<RatConst, RealVar, Prob, RealBin>;

class RealExpr : public detail::Handle<RealNode> {
 public:
  static RealExpr constant(Rational value);
  static RealExpr var(std::string name);
  static RealExpr prob(Formula phi);
  static RealExpr binary(ArithOp op, RealExpr lhs, RealExpr rhs);

  friend bool operator==(const RealExpr& a, const RealExpr& b);

 private:
  using Handle::Handle;
};

struct RatConst {
  Rational value;
  friend bool operator==(const RatConst&, const RatConst&) = default;
};
struct RealVar {
  std::string name;
  friend bool operator==(const RealVar&, const RealVar&) = default;
};
struct Prob {
  Formula phi;
  friend bool operator==(const Prob&, const Prob&) = default;
};
struct RealBin {
  ArithOp op;
  RealExpr lhs;
  RealExpr rhs;
  friend bool operator==(const RealBin&, const RealBin&) = default;
};

// ---------------------------------------------------------------------------
// Probabilistic formulas: r rop r | !F | F && F | F || F | F -> F, plus the
// constants true/false.

struct PConst;
struct PRel;
struct PNot;
struct PAnd;
struct POr;
struct PImplies;
using ProbNode = std::variant<PConst, PRel, PNot, PAnd, POr, PImplies>;

class ProbFormula : public detail::Handle<ProbNode> {
 public:
  static ProbFormula constant(bool value);
  static ProbFormula rel(RelOp op, RealExpr lhs, RealExpr rhs);
  static ProbFormula negation(ProbFormula arg);
  static ProbFormula conjunction(ProbFormula lhs, ProbFormula rhs);
  static ProbFormula disjunction(ProbFormula lhs, ProbFormula rhs);
  static ProbFormula implication(ProbFormula lhs, ProbFormula rhs);

  friend bool operator==(const ProbFormula& a, const ProbFormula& b);

 private:
  using Handle::Handle;
};

struct PConst {
  bool value;
  friend bool operator==(const PConst&, const PConst&) = default;
};
struct PRel {
  RelOp op;
  RealExpr lhs;
  RealExpr rhs;
  friend bool operator==(const PRel&, const PRel&) = default;
};
struct PNot {
  ProbFormula arg;
  friend bool operator==(const PNot&, const PNot&) = default;
};
struct PAnd {
  ProbFormula lhs;
  ProbFormula rhs;
  friend bool operator==(const PAnd&, const PAnd&) = default;
};
struct POr {
  ProbFormula lhs;
  ProbFormula rhs;
  friend bool operator==(const POr&, const POr&) = default;
};
struct PImplies {
  ProbFormula lhs;
  ProbFormula rhs;
  friend bool operator==(const PImplies&, const PImplies&) = default;
};

// ---------------------------------------------------------------------------
// Commands

/// The literal {a_1:k_1, ..., a_n:k_n} of a probabilistic assignment.
/// Weights lie in [0,1] and sum to exactly 1; values are pairwise distinct.
class DistSpec {
 public:
  struct Entry {
    Rational weight;
    Integer value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Validates the invariants; throws std::invalid_argument.
  explicit DistSpec(std::vector<Entry> entries);

  /// Sums the weights of repeated values (first occurrence keeps its
  /// position) and then validates. Appends one message per merged value.
  static DistSpec merged(const std::vector<Entry>& entries, std::vector<std::string>* warnings = nullptr);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const DistSpec&, const DistSpec&) = default;

 private:
  std::vector<Entry> entries_;
};

struct Skip;
struct Assign;
struct PAssign;
struct Seq;
struct If;
struct While;
using CommandNode = std::variant<Skip, Assign, PAssign, Seq, If, While>;

class Command : public detail::Handle<CommandNode> {
 public:
  static Command skip();
  static Command assign(std::string var, Expr value);
  static Command passign(std::string var, DistSpec dist);
  static Command seq(Command first, Command second);
  /// Guards must be program-level; throws std::invalid_argument otherwise.
  static Command if_then_else(Formula guard, Command then_branch, Command else_branch);
  static Command while_do(Formula guard, Command body);

  friend bool operator==(const Command& a, const Command& b);

 private:
  using Handle::Handle;
};

struct Skip {
  friend bool operator==(const Skip&, const Skip&) = default;
};
struct Assign {
  std::string var;
  Expr value;
  friend bool operator==(const Assign&, const Assign&) = default;
};
struct PAssign {
  std::string var;
  DistSpec dist;
  friend bool operator==(const PAssign&, const PAssign&) = default;
};
struct Seq {
  Command first;
  Command second;
  friend bool operator==(const Seq&, const Seq&) = default;
};
struct If {
  Formula guard;
  Command then_branch;
  Command else_branch;
  friend bool operator==(const If&, const If&) = default;
};
struct While {
  Formula guard;
  Command body;
  friend bool operator==(const While&, const While&) = default;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Variables and substitution

using NameSet = std::set<std::string, std::less<>>;

void collect_prog_vars(const Expr& e, NameSet& out);
void collect_prog_vars(const Formula& f, NameSet& out);
void collect_prog_vars(const RealExpr& r, NameSet& out);
void collect_prog_vars(const ProbFormula& f, NameSet& out);
void collect_prog_vars(const Command& c, NameSet& out);

/// Logical variables not bound by an enclosing quantifier.
NameSet free_log_vars(const Formula& f);
NameSet free_log_vars(const RealExpr& r);
NameSet free_log_vars(const ProbFormula& f);
NameSet real_vars(const RealExpr& r);
NameSet real_vars(const ProbFormula& f);

/// e[X/E]
Expr subst(const Expr& e, std::string_view var, const Expr& by);
/// phi[X/E]. Quantifiers bind logical variables only, so no capture can occur.
Formula subst(const Formula& f, std::string_view var, const Expr& by);
/// r[X/E], substituting inside every P(.) atom.
RealExpr subst(const RealExpr& r, std::string_view var, const Expr& by);

/// Quantifier-free with no logical variables.
inline bool is_guard(const Formula& f) { return f.is_program_level(); }

}  // namespace phl
