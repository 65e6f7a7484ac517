#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ccwlan {

__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Arithmetic
/// is carried out in 128-bit intermediates and throws std::overflow_error
/// when the reduced result no longer fits.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_{value} {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  /// "p/q" form, always with an explicit denominator.
  std::string to_string() const;

  /// Accepts "p", "p/q" or a decimal such as "0.25" (converted exactly).
  static Rational parse(std::string_view text);

  /// Closest rational with denominator at most max_den (continued fractions).
  static Rational approximate(double value, std::int64_t max_den = 1'000'000);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  static Rational from_wide(Int128 num, Int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline double to_double(const Rational& r) { return r.to_double(); }
inline double to_double(double d) { return d; }

}  // namespace ccwlan
