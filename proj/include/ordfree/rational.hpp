#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "ordfree/errors.hpp"

namespace ordfree {

namespace mp = boost::multiprecision;

// Expression templates off: `auto` stays a value type and comparisons are exact.
using Integer = mp::number<mp::backends::cpp_int_backend<>, mp::et_off>;
using Rational =
    mp::number<mp::backends::rational_adaptor<mp::backends::cpp_int_backend<>>, mp::et_off>;

inline std::strong_ordering rational_cmp(const Rational& a, const Rational& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

/// Largest integer <= x.
inline Integer rfloor(const Rational& x) {
  Integer q = numerator(x) / denominator(x);  // truncates toward zero
  if (numerator(x) < 0 && q * denominator(x) != numerator(x)) --q;
  return q;
}

/// Smallest integer >= x.
inline Integer rceil(const Rational& x) { return -rfloor(-x); }

inline Integer ifloor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Rational rabs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// x^k for integer k (x != 0 when k < 0).
inline Rational rpow(const Rational& x, std::int64_t k) {
  Rational base = x;
  std::uint64_t e;
  if (k < 0) {
    if (x == 0) throw DomainError("rpow: zero base with negative exponent");
    base = Rational(1) / x;
    e = static_cast<std::uint64_t>(-(k + 1)) + 1;
  } else {
    e = static_cast<std::uint64_t>(k);
  }
  Rational r = 1;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

/// lcm of two positive rationals: the smallest positive q with q/a, q/b integral.
inline Rational rational_lcm(const Rational& a, const Rational& b) {
  if (a <= 0 || b <= 0) throw DomainError("rational_lcm: arguments must be positive");
  Integer n = mp::lcm(Integer(numerator(a)), Integer(numerator(b)));
  Integer d = mp::gcd(Integer(denominator(a)), Integer(denominator(b)));
  return Rational(n, d);
}

/// Canonical textual form: `-?digits/digits`, lowest terms, denominator positive.
inline std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

/// Accepts `-?digits` and `-?digits/digits`; normalizes to lowest terms.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw ParseError("bad rational: '" + std::string(text) + "'"); };
  std::size_t pos = 0;
  auto read_int = [&](bool allow_sign) -> Integer {
    std::size_t start = pos;
    if (allow_sign && pos < text.size() && text[pos] == '-') ++pos;
    std::size_t digits_from = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits_from) fail();
    return Integer(std::string(text.substr(start, pos - start)));
  };
  Integer num = read_int(true);
  Integer den = 1;
  if (pos < text.size()) {
    if (text[pos] != '/') fail();
    ++pos;
    den = read_int(false);
    if (den == 0) fail();
  }
  if (pos != text.size()) fail();
  return Rational(num, den);
}

}  // namespace ordfree
