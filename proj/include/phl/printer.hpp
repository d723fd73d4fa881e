#pragma once

// Concrete syntax output. Everything printed here parses back to a
// structurally identical tree.

#include <ostream>
#include <string>

#include "phl/ast.hpp"

namespace phl {

std::string to_string(const Expr& e);
std::string to_string(const Formula& f);
std::string to_string(const RealExpr& r);
std::string to_string(const ProbFormula& f);
std::string to_string(const DistSpec& d);
std::string to_string(const Command& c);

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }
inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }
inline std::ostream& operator<<(std::ostream& os, const RealExpr& r) { return os << to_string(r); }
inline std::ostream& operator<<(std::ostream& os, const ProbFormula& f) { return os << to_string(f); }
inline std::ostream& operator<<(std::ostream& os, const Command& c) { return os << to_string(c); }

}  // namespace phl
