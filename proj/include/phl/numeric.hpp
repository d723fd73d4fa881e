#pragma once

// Exact integers and rationals. Nothing in the toolkit uses floating point.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace phl {

/// Arbitrary-precision integer.
class Integer {
 public:
  Integer() = default;
  Integer(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Integer(int value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  explicit Integer(mpz_class value) : value_(std::move(value)) {}

  /// Parses an optionally signed decimal literal; throws std::invalid_argument.
  static Integer parse(std::string_view text);

  const mpz_class& raw() const { return value_; }

  bool fits_long() const { return value_.fits_slong_p(); }
  long to_long() const { return value_.get_si(); }
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }

  std::string to_string() const { return value_.get_str(); }
  std::size_t hash() const;

  friend Integer operator+(const Integer& a, const Integer& b) { return Integer(mpz_class(a.value_ + b.value_)); }
  friend Integer operator-(const Integer& a, const Integer& b) { return Integer(mpz_class(a.value_ - b.value_)); }
  friend Integer operator*(const Integer& a, const Integer& b) { return Integer(mpz_class(a.value_ * b.value_)); }
  Integer operator-() const { return Integer(mpz_class(-value_)); }

  Integer& operator+=(const Integer& o) { value_ += o.value_; return *this; }

  friend bool operator==(const Integer& a, const Integer& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  mpz_class value_;
};

/// Exact rational, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& value) : value_(value.raw()) {}  // NOLINT(google-explicit-constructor)
  /// Throws std::domain_error on a zero denominator.
  Rational(const Integer& num, const Integer& den);
  explicit Rational(mpq_class value);

  /// Accepts "n", "-n", "n/d". Decimal points are rejected. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  Integer numerator() const { return Integer(mpz_class(value_.get_num())); }
  Integer denominator() const { return Integer(mpz_class(value_.get_den())); }
  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  /// Always "n/d", also for integral values ("1/1", "0/1").
  std::string to_fraction_string() const;
  /// "n" for integral values, "n/d" otherwise.
  std::string to_string() const;
  std::size_t hash() const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
  /// Throws std::domain_error on division by zero.
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-value_)); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  mpq_class value_;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace phl

template <>
struct std::hash<phl::Integer> {
  std::size_t operator()(const phl::Integer& v) const { return v.hash(); }
};
template <>
struct std::hash<phl::Rational> {
  std::size_t operator()(const phl::Rational& v) const { return v.hash(); }
};
