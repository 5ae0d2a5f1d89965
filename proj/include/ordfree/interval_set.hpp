#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ordfree/interval.hpp"

namespace ordfree {

// A finite union of intervals kept sorted, disjoint and non-touching.
// Exact throughout; the workhorse behind covering checks and support reports.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts) { insert_all(std::move(parts)); }

  void insert(Interval v) {
    parts_.push_back(std::move(v));
    normalize();
  }

  void insert_all(std::vector<Interval> parts) {
    for (auto& p : parts) parts_.push_back(std::move(p));
    normalize();
  }

  bool empty() const { return parts_.empty(); }
  const std::vector<Interval>& parts() const { return parts_; }

  bool contains(const Rational& x) const {
    for (const auto& p : parts_)
      if (p.contains(x)) return true;
    return false;
  }

  bool contains(const IntervalSet& other) const { return other.minus(*this).empty(); }

  IntervalSet minus(const IntervalSet& other) const {
    std::vector<Interval> acc = parts_;
    for (const auto& cut : other.parts_) {
      std::vector<Interval> next;
      for (const auto& piece : acc) {
        auto rest = interval_minus(piece, cut);
        next.insert(next.end(), rest.begin(), rest.end());
      }
      acc = std::move(next);
    }
    IntervalSet out;
    out.parts_ = std::move(acc);
    out.normalize();
    return out;
  }

  IntervalSet intersect_with(const Interval& window) const {
    IntervalSet out;
    for (const auto& p : parts_) {
      if (auto cut = intersect(p, window)) out.parts_.push_back(*cut);
    }
    out.normalize();
    return out;
  }

  static std::vector<Interval> interval_minus(const Interval& a, const Interval& b) {
    std::vector<Interval> out;
    auto mid = intersect(a, b);
    if (!mid) {
      out.push_back(a);
      return out;
    }
    // left remainder: from a.lo up to mid.lo (exclusive of mid)
    if (detail::cmp_lower(a, *mid) < 0) {
      out.push_back(Interval::make(a.lo, a.lo_closed, mid->lo, !mid->lo_closed));
    }
    // right remainder
    if (detail::cmp_upper(*mid, a) < 0) {
      out.push_back(Interval::make(mid->hi, !mid->hi_closed, a.hi, a.hi_closed));
    }
    return out;
  }

 private:
  void normalize() {
    if (parts_.empty()) return;
    std::sort(parts_.begin(), parts_.end(), [](const Interval& x, const Interval& y) {
      int c = detail::cmp_lower(x, y);
      if (c != 0) return c < 0;
      return detail::cmp_upper(x, y) < 0;
    });
    std::vector<Interval> merged;
    merged.push_back(parts_.front());
    for (std::size_t i = 1; i < parts_.size(); ++i) {
      Interval& tail = merged.back();
      const Interval& next = parts_[i];
      if (detail::upper_meets_lower(tail, next)) {
        if (detail::cmp_upper(tail, next) < 0) {
          tail.hi = next.hi;
          tail.hi_closed = next.hi_closed;
        }
      } else {
        merged.push_back(next);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

}  // namespace ordfree
