#pragma once

// Exact rationals over 64-bit integers. Every operation is carried out in
// 128-bit intermediates and reduced; results that do not fit back into
// 64 bits raise ErrorKind::Overflow rather than wrapping.

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "multeq/error.hpp"

namespace multeq {

using i128 = __int128;

namespace detail {

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) fail(ErrorKind::Overflow, "rational component exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

inline std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  // Avoid negating INT128_MIN by working digit-by-digit on the signed value.
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

}  // namespace detail

class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  static Rational from_i128(i128 n, i128 d) {
    Rational r;
    r.assign(n, d);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }
  Rational reciprocal() const {
    if (num_ == 0) fail(ErrorKind::InvalidArgument, "reciprocal of zero");
    return from_i128(den_, num_);
  }

  /// Largest integer <= value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  std::int64_t ceil() const { return -Rational(-num_, den_).floor(); }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "num/den" (always with the slash; den > 0).
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  /// Accepts "a", "a/b", with optional leading sign on a.
  static Rational parse(std::string_view text) {
    auto slash = text.find('/');
    auto to_int = [&](std::string_view part) -> std::int64_t {
      std::string s(part);
      if (s.empty()) fail(ErrorKind::InvalidArgument, "malformed rational '" + std::string(text) + "'");
      char* end = nullptr;
      long long v = std::strtoll(s.c_str(), &end, 10);
      if (end == nullptr || *end != '\0') fail(ErrorKind::InvalidArgument, "malformed rational '" + std::string(text) + "'");
      return v;
    };
    if (slash == std::string_view::npos) return Rational(to_int(text));
    std::int64_t d = to_int(text.substr(slash + 1));
    if (d == 0) fail(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    return Rational(to_int(text.substr(0, slash)), d);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first so products of already-reduced values stay small.
    std::int64_t g1 = std::gcd(a.num_, b.den_);
    std::int64_t g2 = std::gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return from_i128(i128(a.num_ / g1) * (b.num_ / g2), i128(a.den_ / g2) * (b.den_ / g1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }
  Rational operator-() const { return Rational(-num_, den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    i128 lhs = i128(a.num_) * b.den_;
    i128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign(i128 n, i128 d) {
    if (d == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = detail::narrow(n);
    den_ = detail::narrow(d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Integer power with overflow detection.
inline Rational pow(Rational base, unsigned exp) {
  Rational r(1);
  while (exp != 0) {
    if (exp & 1U) r *= base;
    exp >>= 1U;
    if (exp != 0) base *= base;
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::Overflow, "integer product exceeds 64 bits");
  return r;
}

inline std::int64_t ipow(std::int64_t base, unsigned exp) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace multeq
