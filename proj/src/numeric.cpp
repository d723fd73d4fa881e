#include "phl/numeric.hpp"

#include <cctype>
#include <stdexcept>

namespace phl {

namespace {

bool is_decimal_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Integer Integer::parse(std::string_view text) {
  if (!is_decimal_integer(text)) throw std::invalid_argument("not an integer literal: '" + std::string(text) + "'");
  if (text.front() == '+') text.remove_prefix(1);
  return Integer(mpz_class(std::string(text), 10));
}

std::size_t Integer::hash() const {
  std::size_t h = std::hash<long>{}(static_cast<long>(mpz_get_ui(value_.get_mpz_t())));
  h = hash_combine(h, static_cast<std::size_t>(sgn(value_) + 1));
  return hash_combine(h, mpz_size(value_.get_mpz_t()));
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den.is_zero()) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(num.raw(), den.raw());
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(Integer::parse(text));
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!den.empty() && (den.front() == '-' || den.front() == '+')) {
    throw std::invalid_argument("signed denominator in '" + std::string(text) + "'");
  }
  return Rational(Integer::parse(num), Integer::parse(den));
}

std::string Rational::to_fraction_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return to_fraction_string();
}

std::size_t Rational::hash() const { return hash_combine(numerator().hash(), denominator().hash()); }

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("rational division by zero");
  return Rational(mpq_class(a.value_ / b.value_));
}

}  // namespace phl
