#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vcomp {

/// Raised when an exact computation leaves the 64-bit numerator/denominator range.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept reduced with a positive denominator. Intermediate products are
/// formed in 128 bits; a result that does not fit after reduction throws
/// OverflowError instead of wrapping. Values in this project are small grid
/// and fixture numbers, so the bounded range is never the limiting factor for
/// the game computations. The LP solver uses arbitrary precision internally.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design of the arithmetic
  Rational(std::int64_t num, std::int64_t den);

  [[nodiscard]] constexpr std::int64_t num() const { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const { return den_; }

  [[nodiscard]] bool is_zero() const { return num_ == 0; }
  [[nodiscard]] bool is_negative() const { return num_ < 0; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }
  [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p/q", always with an explicit denominator (e.g. "0/1", "1200/501").
  [[nodiscard]] std::string to_string() const;
  /// Finite decimal when the denominator is 2^a 5^b, otherwise "p/q".
  [[nodiscard]] std::string to_decimal_or_fraction() const;

  /// Parses "12", "3.03", "1/3", "-2/5". Decimal input is exact (3.03 == 303/100).
  static Rational parse(std::string_view text);

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Monetary amounts (values, bids, prices) are nonnegative Rationals. The sign
/// invariant is enforced where set functions are validated, not by the type.
using Money = Rational;

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational abs(const Rational& a);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace vcomp

template <>
struct std::hash<vcomp::Rational> {
  std::size_t operator()(const vcomp::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 31u + std::hash<std::int64_t>{}(r.den());
  }
};
