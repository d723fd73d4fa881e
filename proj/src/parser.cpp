#include "phl/parser.hpp"

#include <cctype>
#include <optional>
#include <stdexcept>

#include "phl/printer.hpp"

namespace phl {

namespace {

enum class Tok {
  integer, ident, lident, kw_skip, kw_if, kw_then, kw_else, kw_while, kw_do, kw_true, kw_false, kw_forall,
  assign, passign, semi, lbrack, rbrack, lbrace, rbrace, lparen, rparen, comma, colon, slash,
  plus, minus, star, lt, le, eq, ge, gt, bang, and_, or_, arrow, dot, at, end,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int tl = line;
    const int tc = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        throw ParseError(tl, tc, "decimal literals are not allowed; write an exact fraction n/d");
      }
      out.push_back({Tok::integer, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      Tok kind = std::isupper(static_cast<unsigned char>(c)) || c == '_' ? Tok::ident : Tok::lident;
      if (word == "skip") kind = Tok::kw_skip;
      else if (word == "if") kind = Tok::kw_if;
      else if (word == "then") kind = Tok::kw_then;
      else if (word == "else") kind = Tok::kw_else;
      else if (word == "while") kind = Tok::kw_while;
      else if (word == "do") kind = Tok::kw_do;
      else if (word == "true") kind = Tok::kw_true;
      else if (word == "false") kind = Tok::kw_false;
      else if (word == "forall") kind = Tok::kw_forall;
      out.push_back({kind, std::move(word), tl, tc});
      advance(j - i);
      continue;
    }
    auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static constexpr Sym syms[] = {
        {":=$", Tok::passign}, {":=", Tok::assign}, {"<=", Tok::le}, {">=", Tok::ge}, {"&&", Tok::and_},
        {"||", Tok::or_},      {"->", Tok::arrow},  {";", Tok::semi}, {"[", Tok::lbrack}, {"]", Tok::rbrack},
        {"{", Tok::lbrace},    {"}", Tok::rbrace},  {"(", Tok::lparen}, {")", Tok::rparen}, {",", Tok::comma},
        {":", Tok::colon},     {"/", Tok::slash},   {"+", Tok::plus}, {"-", Tok::minus}, {"*", Tok::star},
        {"<", Tok::lt},        {"=", Tok::eq},      {">", Tok::gt},   {"!", Tok::bang},  {".", Tok::dot},
        {"@", Tok::at},
    };
    bool matched = false;
    for (const auto& s : syms) {
      if (starts(s.text)) {
        out.push_back({s.kind, std::string(s.text), tl, tc});
        advance(s.text.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(tl, tc, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

std::optional<RelOp> rel_op(Tok t) {
  switch (t) {
    case Tok::lt: return RelOp::lt;
    case Tok::le: return RelOp::le;
    case Tok::eq: return RelOp::eq;
    case Tok::ge: return RelOp::ge;
    case Tok::gt: return RelOp::gt;
    default: return std::nullopt;
  }
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<std::string>* warnings)
      : toks_(std::move(toks)), warnings_(warnings) {
    for (const auto& t : toks_) {
      if (t.kind == Tok::ident) used_.insert(t.text);
    }
  }

  // --- commands -------------------------------------------------------------

  Command command() {
    Command first = choice();
    if (accept(Tok::semi)) return Command::seq(first, command());
    return first;
  }

  // --- deterministic formulas -----------------------------------------------

  Formula formula(bool program_level) {
    Formula lhs = disjunction(program_level);
    if (accept(Tok::arrow)) return Formula::implication(lhs, formula(program_level));
    return lhs;
  }

  // --- real expressions and probabilistic formulas --------------------------

  RealExpr real_sum() {
    RealExpr lhs = real_term();
    while (true) {
      if (accept(Tok::plus)) lhs = RealExpr::binary(ArithOp::add, lhs, real_term());
      else if (accept(Tok::minus)) lhs = RealExpr::binary(ArithOp::sub, lhs, real_term());
      else return lhs;
    }
  }

  ProbFormula prob_formula() {
    ProbFormula lhs = prob_disjunction();
    if (accept(Tok::arrow)) return ProbFormula::implication(lhs, prob_formula());
    return lhs;
  }

  Expr arith(bool program_level) { return sum(program_level); }

  void expect_end() {
    if (peek().kind != Tok::end) fail(peek(), "unexpected " + describe(peek()) + " after complete input");
  }

  std::size_t position() const { return pos_; }
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw ParseError(at.line, at.col, msg); }

  const Token& expect(Tok k, std::string_view what) {
    if (peek().kind != k) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    return toks_[pos_++];
  }

  Integer integer_literal() {
    const bool neg = accept(Tok::minus);
    const Token& t = expect(Tok::integer, "integer");
    Integer v = Integer::parse(t.text);
    return neg ? -v : v;
  }

  Rational fraction(bool allow_sign) {
    const bool neg = allow_sign && accept(Tok::minus);
    const Integer num = Integer::parse(expect(Tok::integer, "number").text);
    Integer den(1);
    if (accept(Tok::slash)) {
      const Token& d = expect(Tok::integer, "denominator");
      den = Integer::parse(d.text);
      if (den.is_zero()) fail(d, "zero denominator");
    }
    Rational r(num, den);
    return neg ? -r : r;
  }

  // Tries p; on ParseError rewinds and returns nullopt, remembering the
  // error that got furthest for reporting.
  template <class F>
  auto attempt(F&& p) -> std::optional<decltype(p())> {
    const std::size_t saved = pos_;
    try {
      return p();
    } catch (const ParseError& e) {
      remember(e);
      pos_ = saved;
      return std::nullopt;
    }
  }

  void remember(const ParseError& e) {
    if (!best_ || std::pair(e.line(), e.column()) > std::pair(best_->line(), best_->column())) best_ = e;
  }

  [[noreturn]] void rethrow_best(const ParseError& current) {
    remember(current);
    throw *best_;
  }

  // cmd_choice := cmd_atom ("[" frac "]" cmd_atom)*
  Command choice() {
    Command lhs = command_atom();
    while (peek().kind == Tok::lbrack) {
      const Token& open = toks_[pos_++];
      const Rational p = fraction(false);
      if (p > Rational(1)) fail(open, "choice probability " + p.to_string() + " exceeds 1");
      expect(Tok::rbrack, "']'");
      Command rhs = command_atom();
      const std::string flag = fresh_name();
      std::vector<DistSpec::Entry> entries{{p, Integer(0)}, {Rational(1) - p, Integer(1)}};
      lhs = Command::seq(Command::passign(flag, DistSpec(std::move(entries))),
                         Command::if_then_else(Formula::rel(RelOp::eq, Expr::prog_var(flag), Expr::constant(0)),
                                               lhs, rhs));
    }
    return lhs;
  }

  std::string fresh_name() {
    while (true) {
      std::string name = "_F" + std::to_string(next_fresh_++);
      if (used_.insert(name).second) return name;
    }
  }

  Command braced_command() {
    expect(Tok::lbrace, "'{'");
    Command c = command();
    expect(Tok::rbrace, "'}'");
    return c;
  }

  Formula guard() {
    const Token& at = peek();
    Formula g = formula(true);
    if (!is_guard(g)) fail(at, "guard must not contain logical variables or quantifiers");
    return g;
  }

  Command command_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kw_skip:
        ++pos_;
        return Command::skip();
      case Tok::ident: {
        ++pos_;
        if (accept(Tok::assign)) return Command::assign(t.text, arith(true));
        if (accept(Tok::passign)) return Command::passign(t.text, dist_literal());
        fail(peek(), "expected ':=' or ':=$' after " + describe(t) + ", found " + describe(peek()));
      }
      case Tok::kw_if: {
        ++pos_;
        Formula g = guard();
        expect(Tok::kw_then, "'then'");
        Command c1 = braced_command();
        expect(Tok::kw_else, "'else'");
        Command c2 = braced_command();
        return Command::if_then_else(g, c1, c2);
      }
      case Tok::kw_while: {
        ++pos_;
        Formula g = guard();
        expect(Tok::kw_do, "'do'");
        return Command::while_do(g, braced_command());
      }
      case Tok::lparen: {
        ++pos_;
        Command c = command();
        expect(Tok::rparen, "')'");
        return c;
      }
      case Tok::lident:
        fail(t, "assigned variable " + describe(t) + " must start with an uppercase letter");
      default:
        fail(t, "expected a command, found " + describe(t));
    }
  }

  DistSpec dist_literal() {
    const Token& open = expect(Tok::lbrace, "'{'");
    std::vector<DistSpec::Entry> entries;
    do {
      const Rational w = fraction(false);
      expect(Tok::colon, "':'");
      entries.push_back({w, integer_literal()});
    } while (accept(Tok::comma));
    expect(Tok::rbrace, "'}'");
    try {
      return DistSpec::merged(entries, warnings_);
    } catch (const std::invalid_argument& e) {
      fail(open, e.what());
    }
  }

  // --- arithmetic -----------------------------------------------------------

  Expr sum(bool program_level) {
    Expr lhs = term(program_level);
    while (true) {
      if (accept(Tok::plus)) lhs = Expr::binary(ArithOp::add, lhs, term(program_level));
      else if (accept(Tok::minus)) lhs = Expr::binary(ArithOp::sub, lhs, term(program_level));
      else return lhs;
    }
  }

  Expr term(bool program_level) {
    Expr lhs = factor(program_level);
    while (accept(Tok::star)) lhs = Expr::binary(ArithOp::mul, lhs, factor(program_level));
    return lhs;
  }

  Expr factor(bool program_level) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer:
      case Tok::minus: return Expr::constant(integer_literal());
      case Tok::ident: ++pos_; return Expr::prog_var(t.text);
      case Tok::lident:
        if (program_level) fail(t, "logical variable " + describe(t) + " not allowed in a program expression");
        ++pos_;
        return Expr::log_var(t.text);
      case Tok::lparen: {
        ++pos_;
        Expr e = sum(program_level);
        expect(Tok::rparen, "')'");
        return e;
      }
      default: fail(t, "expected an arithmetic expression, found " + describe(t));
    }
  }

  // --- formulas -------------------------------------------------------------

  Formula disjunction(bool program_level) {
    Formula lhs = conjunction(program_level);
    while (accept(Tok::or_)) lhs = Formula::disjunction(lhs, conjunction(program_level));
    return lhs;
  }

  Formula conjunction(bool program_level) {
    Formula lhs = unary(program_level);
    while (accept(Tok::and_)) lhs = Formula::conjunction(lhs, unary(program_level));
    return lhs;
  }

  Formula unary(bool program_level) {
    const Token& t = peek();
    if (accept(Tok::bang)) return Formula::negation(unary(program_level));
    if (t.kind == Tok::kw_forall) {
      if (program_level) fail(t, "quantifier not allowed in a guard");
      ++pos_;
      const Token& v = expect(Tok::lident, "a lowercase logical variable");
      expect(Tok::dot, "'.'");
      return Formula::forall(v.text, formula(program_level));
    }
    return formula_atom(program_level);
  }

  Formula formula_atom(bool program_level) {
    const Token& t = peek();
    if (accept(Tok::kw_true)) return Formula::truth();
    if (accept(Tok::kw_false)) return Formula::falsity();
    if (t.kind == Tok::lparen) {
      auto inner = attempt([&] {
        ++pos_;
        Formula f = formula(program_level);
        expect(Tok::rparen, "')'");
        return f;
      });
      if (inner) return *inner;
    }
    try {
      Expr lhs = sum(program_level);
      const Token& op = peek();
      const auto r = rel_op(op.kind);
      if (!r) fail(op, "expected a relation (<, <=, =, >=, >), found " + describe(op));
      ++pos_;
      return Formula::rel(*r, lhs, sum(program_level));
    } catch (const ParseError& e) {
      rethrow_best(e);
    }
  }

  // --- reals ----------------------------------------------------------------

  RealExpr real_term() {
    RealExpr lhs = real_factor();
    while (accept(Tok::star)) lhs = RealExpr::binary(ArithOp::mul, lhs, real_factor());
    return lhs;
  }

  RealExpr real_factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer:
      case Tok::minus: return RealExpr::constant(fraction(true));
      case Tok::at: {
        ++pos_;
        const Token& v = expect(Tok::lident, "a lowercase real variable after '@'");
        return RealExpr::var(v.text);
      }
      case Tok::ident:
        if (t.text == "P" && peek(1).kind == Tok::lparen) {
          pos_ += 2;
          Formula phi = formula(false);
          expect(Tok::rparen, "')'");
          return RealExpr::prob(phi);
        }
        fail(t, "program variable " + describe(t) + " may only occur inside P(...)");
      case Tok::lparen: {
        ++pos_;
        RealExpr r = real_sum();
        expect(Tok::rparen, "')'");
        return r;
      }
      default: fail(t, "expected a real expression, found " + describe(t));
    }
  }

  ProbFormula prob_disjunction() {
    ProbFormula lhs = prob_conjunction();
    while (accept(Tok::or_)) lhs = ProbFormula::disjunction(lhs, prob_conjunction());
    return lhs;
  }

  ProbFormula prob_conjunction() {
    ProbFormula lhs = prob_unary();
    while (accept(Tok::and_)) lhs = ProbFormula::conjunction(lhs, prob_unary());
    return lhs;
  }

  ProbFormula prob_unary() {
    if (accept(Tok::bang)) return ProbFormula::negation(prob_unary());
    const Token& t = peek();
    if (accept(Tok::kw_true)) return ProbFormula::constant(true);
    if (accept(Tok::kw_false)) return ProbFormula::constant(false);
    if (t.kind == Tok::lparen) {
      auto inner = attempt([&] {
        ++pos_;
        ProbFormula f = prob_formula();
        expect(Tok::rparen, "')'");
        return f;
      });
      if (inner) return *inner;
    }
    try {
      RealExpr lhs = real_sum();
      const Token& op = peek();
      const auto r = rel_op(op.kind);
      if (!r) fail(op, "expected a relation (<, <=, =, >=, >), found " + describe(op));
      ++pos_;
      return ProbFormula::rel(*r, lhs, real_sum());
    } catch (const ParseError& e) {
      rethrow_best(e);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string>* warnings_;
  NameSet used_;
  int next_fresh_ = 0;
  std::optional<ParseError> best_;
};

template <class T, class F>
T parse_whole(std::string_view text, std::vector<std::string>* warnings, F&& f) {
  Parser p(lex(text), warnings);
  T out = f(p);
  p.expect_end();
  return out;
}

bool has_prob_atom(const std::vector<Token>& toks) {
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind == Tok::at) return true;
    if (toks[i].kind == Tok::ident && toks[i].text == "P" && i + 1 < toks.size() && toks[i + 1].kind == Tok::lparen) {
      return true;
    }
  }
  return false;
}

}  // namespace

Command parse_command(std::string_view text, std::vector<std::string>* warnings) {
  return parse_whole<Command>(text, warnings, [](Parser& p) { return p.command(); });
}

Formula parse_det_formula(std::string_view text) {
  return parse_whole<Formula>(text, nullptr, [](Parser& p) { return p.formula(false); });
}

RealExpr parse_real_expr(std::string_view text) {
  return parse_whole<RealExpr>(text, nullptr, [](Parser& p) { return p.real_sum(); });
}

ProbFormula parse_prob_formula(std::string_view text) {
  return parse_whole<ProbFormula>(text, nullptr, [](Parser& p) { return p.prob_formula(); });
}

Expr parse_arith(std::string_view text) {
  return parse_whole<Expr>(text, nullptr, [](Parser& p) { return p.arith(true); });
}

State parse_state(std::string_view text) {
  State::Map values;
  Parser p(lex(text), nullptr);
  if (p.peek().kind == Tok::end) return State();
  do {
    const Token name = p.peek();
    if (!p.accept(Tok::ident)) {
      throw ParseError(name.line, name.col, "expected a program variable, found " + describe(name));
    }
    const Token eq = p.peek();
    if (!p.accept(Tok::eq)) throw ParseError(eq.line, eq.col, "expected '=', found " + describe(eq));
    const bool neg = p.accept(Tok::minus);
    const Token num = p.peek();
    if (!p.accept(Tok::integer)) throw ParseError(num.line, num.col, "expected an integer, found " + describe(num));
    Integer v = Integer::parse(num.text);
    if (!values.emplace(name.text, neg ? -v : v).second) {
      throw ParseError(name.line, name.col, "variable " + name.text + " given twice");
    }
  } while (p.accept(Tok::comma));
  p.expect_end();
  return State(std::move(values));
}

SourceTriple parse_triple(std::string_view text, std::vector<std::string>* warnings) {
  auto toks = lex(text);
  const Token& first = toks.front();
  if (first.kind != Tok::lbrace) throw ParseError(first.line, first.col, "a triple starts with '{'");

  // Assertions contain no braces: the precondition closes at the first '}',
  // the postcondition opens at the last '{'.
  std::size_t pre_end = 0;
  while (toks[pre_end].kind != Tok::rbrace && toks[pre_end].kind != Tok::end) ++pre_end;
  if (toks[pre_end].kind == Tok::end) throw ParseError(toks[pre_end].line, toks[pre_end].col, "unclosed precondition");
  std::size_t post_begin = toks.size() - 1;
  while (post_begin > 0 && toks[post_begin].kind != Tok::lbrace) --post_begin;
  const Token& last = toks[toks.size() - 2];
  if (post_begin <= pre_end || last.kind != Tok::rbrace) {
    throw ParseError(last.line, last.col, "a triple ends with a braced postcondition");
  }

  auto slice = [&](std::size_t b, std::size_t e) {
    std::vector<Token> part(toks.begin() + static_cast<std::ptrdiff_t>(b), toks.begin() + static_cast<std::ptrdiff_t>(e));
    part.push_back({Tok::end, "", toks[e].line, toks[e].col});
    return part;
  };
  auto pre_toks = slice(1, pre_end);
  auto cmd_toks = slice(pre_end + 1, post_begin);
  auto post_toks = slice(post_begin + 1, toks.size() - 2);

  auto parse_side = [&](const std::vector<Token>& side, bool prob, const char* which) -> std::variant<Formula, ProbFormula> {
    if (!prob) {
      Parser p(side, nullptr);
      Formula f = p.formula(false);
      p.expect_end();
      return f;
    }
    try {
      Parser p(side, nullptr);
      ProbFormula f = p.prob_formula();
      p.expect_end();
      return f;
    } catch (const ParseError& prob_error) {
      try {
        Parser p(side, nullptr);
        p.formula(false);
        p.expect_end();
      } catch (const ParseError&) {
        throw prob_error;
      }
      const Token& at = side.front();
      throw ParseError(at.line, at.col,
                       std::string("triple mixes a deterministic ") + which +
                           " with a probabilistic assertion on the other side");
    }
  };

  const bool prob = has_prob_atom(pre_toks) || has_prob_atom(post_toks);
  auto pre = parse_side(pre_toks, prob, "precondition");
  Parser cp(std::move(cmd_toks), warnings);
  Command cmd = cp.command();
  cp.expect_end();
  auto post = parse_side(post_toks, prob, "postcondition");
  return SourceTriple{prob ? Flavor::probabilistic : Flavor::deterministic, std::move(pre), std::move(cmd),
                      std::move(post)};
}

std::string to_string(const SourceTriple& t) {
  auto side = [](const std::variant<Formula, ProbFormula>& v) {
    return std::visit([](const auto& f) { return to_string(f); }, v);
  };
  return "{ " + side(t.pre) + " } " + to_string(t.command) + " { " + side(t.post) + " }";
}

}  // namespace phl
