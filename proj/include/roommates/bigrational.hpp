#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace roommates {

using BigInteger = mpz_class;

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class BigRational {
public:
  BigRational() = default;
  BigRational(long value) : value_(value) {}  // NOLINT: implicit by design of the arithmetic type
  BigRational(const BigInteger& numerator, const BigInteger& denominator);
  explicit BigRational(const BigInteger& integer) : value_(integer) {}
  explicit BigRational(mpq_class value);

  /// Parses "a/b" or "a" (optional leading '-'). Throws std::invalid_argument.
  static BigRational parse(std::string_view text);

  BigInteger numerator() const { return value_.get_num(); }
  BigInteger denominator() const { return value_.get_den(); }
  const mpq_class& gmp() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }

  /// "num/den", or just "num" when the denominator is 1.
  std::string to_string() const;

  /// Fixed-point rendering with `digits` fractional digits, rounded half to
  /// even at the last digit.
  std::string to_decimal(int digits) const;

  double to_double() const { return value_.get_d(); }

  BigRational& operator+=(const BigRational& o) { value_ += o.value_; return *this; }
  BigRational& operator-=(const BigRational& o) { value_ -= o.value_; return *this; }
  BigRational& operator*=(const BigRational& o) { value_ *= o.value_; return *this; }
  BigRational& operator/=(const BigRational& o);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }
  friend BigRational operator-(const BigRational& a) { return BigRational(mpq_class(-a.value_)); }

  friend bool operator==(const BigRational& a, const BigRational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const BigRational& r);

BigInteger factorial(unsigned n);

}  // namespace roommates
