#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phl/ast.hpp"
#include "phl/state.hpp"

namespace phl {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

enum class Flavor { deterministic, probabilistic };

struct SourceTriple {
  Flavor flavor = Flavor::deterministic;
  std::variant<Formula, ProbFormula> pre = Formula::truth();
  Command command = Command::skip();
  std::variant<Formula, ProbFormula> post = Formula::truth();

  const Formula& det_pre() const { return std::get<Formula>(pre); }
  const Formula& det_post() const { return std::get<Formula>(post); }
  const ProbFormula& prob_pre() const { return std::get<ProbFormula>(pre); }
  const ProbFormula& prob_post() const { return std::get<ProbFormula>(post); }
};

/// Non-fatal diagnostics (merged duplicate outcomes) are appended to warnings.
Command parse_command(std::string_view text, std::vector<std::string>* warnings = nullptr);
Formula parse_det_formula(std::string_view text);
RealExpr parse_real_expr(std::string_view text);
ProbFormula parse_prob_formula(std::string_view text);
SourceTriple parse_triple(std::string_view text, std::vector<std::string>* warnings = nullptr);
/// Program-level arithmetic expression (no logical variables).
Expr parse_arith(std::string_view text);
/// "X=0, Y=-1"
State parse_state(std::string_view text);

std::string to_string(const SourceTriple& t);

}  // namespace phl
