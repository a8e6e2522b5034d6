#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "gls/error.hpp"

namespace gls {

/// Exact rational number with a 64-bit numerator and a positive denominator,
/// always kept in lowest terms. Overflow throws DomainError instead of
/// wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p/q", an integer, or a finite decimal such as "-0.4167" exactly.
  static Rational parse(std::string_view text) {
    auto fail = [&] { return ConfigError("not a rational number: '" + std::string(text) + "'"); };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw fail();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      Rational n = parse_decimal(text.substr(0, slash));
      Rational d = parse_decimal(text.substr(slash + 1));
      if (d.num_ == 0) throw fail();
      return n / d;
    }
    return parse_decimal(text);
  }

  friend Rational operator+(Rational a, Rational b) {
    std::int64_t g = std::gcd(a.den_, b.den_);
    std::int64_t bd = b.den_ / g;
    return Rational(add(mul(a.num_, bd), mul(b.num_, a.den_ / g)), mul(a.den_, bd));
  }
  friend Rational operator-(Rational a) { return Rational(mul(a.num_, -1), a.den_); }
  friend Rational operator-(Rational a, Rational b) { return a + (-b); }
  friend Rational operator*(Rational a, Rational b) {
    std::int64_t g1 = std::gcd(a.num_, b.den_);
    std::int64_t g2 = std::gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational(mul(a.num_ / g1, b.num_ / g2), mul(a.den_ / g2, b.den_ / g1));
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // Denominators are positive, so cross-multiplication preserves order.
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw DomainError("rational overflow");
    return out;
  }
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw DomainError("rational overflow");
    return out;
  }

  static Rational parse_decimal(std::string_view s) {
    auto fail = [&] { return ConfigError("not a rational number: '" + std::string(s) + "'"); };
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) throw fail();
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : s) {
      if (c == '.' && !seen_point) {
        seen_point = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
      seen_digit = true;
      num = add(mul(num, 10), c - '0');
      if (seen_point) den = mul(den, 10);
    }
    if (!seen_digit) throw fail();
    return Rational(negative ? -num : num, den);
  }

  void normalize() {
    if (den_ < 0) {
      num_ = mul(num_, -1);
      den_ = mul(den_, -1);
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Decimal rendering of `q` rounded half away from zero to `digits` places,
/// computed exactly (no binary floating-point step).
inline std::string to_fixed(const Rational& q, int digits) {
  if (digits < 0 || digits > 18) throw DomainError("to_fixed: digits must lie in [0, 18]");
  __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = q.num() < 0;
  const __int128 mag = negative ? -static_cast<__int128>(q.num()) : static_cast<__int128>(q.num());
  const __int128 den = q.den();
  const __int128 scaled = (2 * mag * scale + den) / (2 * den);
  const __int128 whole = scaled / scale;
  __int128 frac = scaled % scale;

  std::string out = (negative && scaled != 0) ? "-" : "";
  out += std::to_string(static_cast<long long>(whole));
  if (digits > 0) {
    std::string f(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
      f[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
      frac /= 10;
    }
    out += "." + f;
  }
  return out;
}

}  // namespace gls
