#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ordfree/rational.hpp"

namespace ordfree {

// An interval of the rational line. Unbounded ends are open by convention.
// Degenerate single points are allowed as [a,a].
struct Interval {
  std::optional<Rational> lo;  // nullopt = -infinity
  std::optional<Rational> hi;  // nullopt = +infinity
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval all() { return Interval{}; }

  static Interval make(std::optional<Rational> lo, bool lo_closed, std::optional<Rational> hi,
                       bool hi_closed) {
    Interval v{std::move(lo), std::move(hi), lo_closed, hi_closed};
    if (!v.lo) v.lo_closed = false;
    if (!v.hi) v.hi_closed = false;
    if (v.lo && v.hi) {
      if (*v.lo > *v.hi || (*v.lo == *v.hi && !(v.lo_closed && v.hi_closed)))
        throw DomainError("interval: empty bounds " + ordfree::to_string(*v.lo) + " .. " +
                          ordfree::to_string(*v.hi));
    }
    return v;
  }

  static Interval open(const Rational& a, const Rational& b) { return make(a, false, b, false); }
  static Interval closed(const Rational& a, const Rational& b) { return make(a, true, b, true); }
  static Interval left_closed(const Rational& a, const Rational& b) {
    return make(a, true, b, false);
  }
  static Interval point(const Rational& a) { return make(a, true, a, true); }
  static Interval ray_above(const Rational& a, bool closed) {
    return make(a, closed, std::nullopt, false);
  }
  static Interval ray_below(const Rational& b, bool closed) {
    return make(std::nullopt, false, b, closed);
  }

  bool bounded() const { return lo.has_value() && hi.has_value(); }
  bool is_point() const { return bounded() && *lo == *hi; }

  bool contains(const Rational& x) const {
    if (lo) {
      if (x < *lo || (x == *lo && !lo_closed)) return false;
    }
    if (hi) {
      if (x > *hi || (x == *hi && !hi_closed)) return false;
    }
    return true;
  }

  bool operator==(const Interval& o) const {
    return lo == o.lo && hi == o.hi && lo_closed == o.lo_closed && hi_closed == o.hi_closed;
  }

  /// Some rational inside the interval.
  Rational representative() const {
    if (lo && lo_closed) return *lo;
    if (hi && hi_closed) return *hi;
    if (lo && hi) return (*lo + *hi) / 2;
    if (lo) return *lo + 1;
    if (hi) return *hi - 1;
    return Rational(0);
  }

  Rational width() const {
    if (!bounded()) throw DomainError("interval: width of unbounded interval");
    return *hi - *lo;
  }
};

namespace detail {

// Lower-bound order: -inf first; at equal values a closed end starts earlier.
inline int cmp_lower(const Interval& a, const Interval& b) {
  if (!a.lo && !b.lo) return 0;
  if (!a.lo) return -1;
  if (!b.lo) return 1;
  if (*a.lo != *b.lo) return *a.lo < *b.lo ? -1 : 1;
  if (a.lo_closed == b.lo_closed) return 0;
  return a.lo_closed ? -1 : 1;
}

// Upper-bound order: +inf last; at equal values a closed end reaches further.
inline int cmp_upper(const Interval& a, const Interval& b) {
  if (!a.hi && !b.hi) return 0;
  if (!a.hi) return 1;
  if (!b.hi) return -1;
  if (*a.hi != *b.hi) return *a.hi < *b.hi ? -1 : 1;
  if (a.hi_closed == b.hi_closed) return 0;
  return a.hi_closed ? 1 : -1;
}

// True if a's upper end reaches b's lower end with no gap between them.
inline bool upper_meets_lower(const Interval& a, const Interval& b) {
  if (!a.hi || !b.lo) return true;
  if (*a.hi > *b.lo) return true;
  if (*a.hi < *b.lo) return false;
  return a.hi_closed || b.lo_closed;  // touching counts as meeting
}

// True if a's upper end strictly overlaps b's lower end (shared point included).
inline bool upper_overlaps_lower(const Interval& a, const Interval& b) {
  if (!a.hi || !b.lo) return true;
  if (*a.hi > *b.lo) return true;
  if (*a.hi < *b.lo) return false;
  return a.hi_closed && b.lo_closed;
}

}  // namespace detail

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const Interval& first = detail::cmp_lower(a, b) <= 0 ? a : b;
  const Interval& second = detail::cmp_lower(a, b) <= 0 ? b : a;
  if (!detail::upper_overlaps_lower(first, second)) return std::nullopt;
  Interval out;
  out.lo = second.lo;
  out.lo_closed = second.lo_closed;
  const Interval& tight = detail::cmp_upper(a, b) <= 0 ? a : b;
  out.hi = tight.hi;
  out.hi_closed = tight.hi_closed;
  return out;
}

inline bool intervals_intersect(const Interval& a, const Interval& b) {
  return intersect(a, b).has_value();
}

inline std::string to_string(const Interval& v) {
  std::string s;
  s += v.lo_closed ? '[' : '(';
  s += v.lo ? to_string(*v.lo) : std::string("-inf");
  s += ',';
  s += v.hi ? to_string(*v.hi) : std::string("inf");
  s += v.hi_closed ? ']' : ')';
  return s;
}

/// Parses `[a,b)`, `(-inf,inf)`, etc. Endpoints are rationals or -inf/inf.
inline Interval parse_interval(std::string_view text) {
  auto fail = [&] { throw ParseError("bad interval: '" + std::string(text) + "'"); };
  auto strip = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  std::string_view s = strip(text);
  if (s.size() < 3) fail();
  bool lo_closed = s.front() == '[';
  if (!lo_closed && s.front() != '(') fail();
  bool hi_closed = s.back() == ']';
  if (!hi_closed && s.back() != ')') fail();
  s = s.substr(1, s.size() - 2);
  auto comma = s.find(',');
  if (comma == std::string_view::npos) fail();
  std::string_view lo_text = strip(s.substr(0, comma));
  std::string_view hi_text = strip(s.substr(comma + 1));
  std::optional<Rational> lo, hi;
  if (lo_text != "-inf") lo = parse_rational(lo_text);
  if (hi_text != "inf" && hi_text != "+inf") hi = parse_rational(hi_text);
  if (!lo && lo_closed) fail();
  if (!hi && hi_closed) fail();
  return Interval::make(std::move(lo), lo_closed, std::move(hi), hi_closed);
}

}  // namespace ordfree
