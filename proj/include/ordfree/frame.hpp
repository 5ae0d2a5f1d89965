#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ordfree/interval.hpp"
#include "ordfree/rational.hpp"

namespace ordfree {

// A strictly increasing indexed sequence of rational points carving the line
// into left-closed right-open blocks [point(i), point(i+1)).
//
// Storage is a finite explicit window plus a tail rule per unbounded end, so a
// frame is finitely described yet has infinitely many points. Arithmetic tails
// march off to infinity; geometric tails accumulate at a rational limit, which
// is how a frame can be coterminal inside a bounded interval.
class Frame {
 public:
  enum class IndexKind { integers, naturals };

  struct ArithTail {
    Rational step;  // > 0
    bool operator==(const ArithTail&) const = default;
  };
  struct GeomTail {
    Rational limit;  // strictly beyond the anchor point
    Rational ratio;  // in (0,1); gap to the limit shrinks by this factor per step
    bool operator==(const GeomTail&) const = default;
  };
  using Tail = std::variant<ArithTail, GeomTail>;

  Frame(IndexKind kind, std::int64_t first_index, std::vector<Rational> points, Tail up,
        std::optional<Tail> down)
      : kind_(kind),
        first_(first_index),
        points_(std::move(points)),
        up_(std::move(up)),
        down_(std::move(down)) {
    validate();
    canonicalize();
  }

  /// The integer lattice: point(i) = i, indexed over all of Z.
  static Frame unit() {
    return Frame(IndexKind::integers, 0, {Rational(0)}, ArithTail{1}, ArithTail{1});
  }

  /// point(i) = i for i in N only.
  static Frame unit_naturals() {
    return Frame(IndexKind::naturals, 0, {Rational(0)}, ArithTail{1}, std::nullopt);
  }

  /// Arithmetic lattice point(i) = base + i*step over Z.
  static Frame arithmetic(const Rational& base, const Rational& step) {
    return Frame(IndexKind::integers, 0, {base}, ArithTail{step}, ArithTail{step});
  }

  /// A Z-indexed frame coterminal in the bounded open interval (a, b):
  /// points accumulate at both endpoints with gaps halving each step.
  static Frame geometric_in(const Interval& v) {
    if (!v.bounded() || v.is_point()) throw DomainError("frame: need a bounded open interval");
    const Rational a = *v.lo, b = *v.hi;
    const Rational mid = (a + b) / 2;
    return Frame(IndexKind::integers, 0, {mid}, GeomTail{b, Rational(1, 2)},
                 GeomTail{a, Rational(1, 2)});
  }

  /// An N-indexed frame inside (a, b): starts at the midpoint, accumulates at b.
  static Frame geometric_naturals_in(const Interval& v) {
    if (!v.bounded() || v.is_point()) throw DomainError("frame: need a bounded open interval");
    const Rational a = *v.lo, b = *v.hi;
    const Rational mid = (a + b) / 2;
    return Frame(IndexKind::naturals, 0, {mid}, GeomTail{b, Rational(1, 2)}, std::nullopt);
  }

  IndexKind kind() const { return kind_; }
  std::int64_t first_explicit_index() const { return first_; }
  std::int64_t last_explicit_index() const {
    return first_ + static_cast<std::int64_t>(points_.size()) - 1;
  }
  const std::vector<Rational>& explicit_points() const { return points_; }
  const Tail& up_tail() const { return up_; }
  const std::optional<Tail>& down_tail() const { return down_; }

  bool valid_index(std::int64_t i) const {
    return kind_ == IndexKind::integers || i >= 0;
  }

  Rational point(std::int64_t i) const {
    if (!valid_index(i)) throw DomainError("frame: negative index on a naturals frame");
    const std::int64_t hi = last_explicit_index();
    if (i >= first_ && i <= hi) return points_[static_cast<std::size_t>(i - first_)];
    if (i > hi) return tail_point(points_.back(), up_, i - hi);
    return tail_point(points_.front(), *down_, i - first_);
  }

  /// Block i is [point(i), point(i+1)).
  Interval block(std::int64_t i) const { return Interval::left_closed(point(i), point(i + 1)); }

  /// Convex hull of all points. Open at geometric limits (never attained),
  /// closed at point(0) for naturals frames.
  Interval hull() const {
    std::optional<Rational> lo, hi;
    bool lo_closed = false;
    if (kind_ == IndexKind::naturals) {
      lo = points_.front();
      lo_closed = true;
    } else if (const auto* g = std::get_if<GeomTail>(&*down_)) {
      lo = g->limit;
    }
    if (const auto* g = std::get_if<GeomTail>(&up_)) hi = g->limit;
    return Interval::make(std::move(lo), lo_closed, std::move(hi), false);
  }

  /// Index i with point(i) <= x < point(i+1), or nullopt when x is outside the hull.
  std::optional<std::int64_t> locate(const Rational& x) const {
    const std::int64_t hi_idx = last_explicit_index();
    const Rational& lo_pt = points_.front();
    const Rational& hi_pt = points_.back();
    if (x < lo_pt) {
      if (kind_ == IndexKind::naturals) return std::nullopt;
      return locate_down(x);
    }
    if (x >= hi_pt) return locate_up(x);
    // binary search in the explicit window: greatest k with points_[k] <= x
    std::size_t lo = 0, hi = points_.size() - 1;
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (points_[mid] <= x)
        lo = mid;
      else
        hi = mid;
    }
    (void)hi_idx;
    return first_ + static_cast<std::int64_t>(lo);
  }

  /// Every 'stride'-th point starting at index 'offset', reindexed from 0.
  /// new.point(j) == old.point(offset + stride*j); tails carry over.
  Frame subsample(std::int64_t stride, std::int64_t offset) const {
    if (stride <= 0) throw DomainError("frame: subsample stride must be positive");
    if (kind_ == IndexKind::naturals && offset < 0)
      throw DomainError("frame: subsample offset must be >= 0 on a naturals frame");
    Tail up = retime_tail(up_, stride);
    std::optional<Tail> down;
    if (down_) down = retime_tail(*down_, stride);
    // explicit window: cover the old prefix so tail anchors line up
    std::int64_t j1 = ifloor_div(Integer(first_ - offset), Integer(stride)).convert_to<std::int64_t>();
    std::int64_t j2 =
        -ifloor_div(Integer(-(last_explicit_index() - offset)), Integer(stride)).convert_to<std::int64_t>();
    if (kind_ == IndexKind::naturals) j1 = std::max<std::int64_t>(j1, 0);
    if (j2 < j1) j2 = j1;
    std::vector<Rational> pts;
    for (std::int64_t j = j1; j <= j2; ++j) pts.push_back(point(offset + stride * j));
    return Frame(kind_, j1, std::move(pts), std::move(up), std::move(down));
  }

  /// The same indexing with every point translated by t.
  Frame shifted(const Rational& t) const {
    std::vector<Rational> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(p + t);
    auto shift_tail = [&](const Tail& tail) -> Tail {
      if (const auto* a = std::get_if<ArithTail>(&tail)) return *a;
      const auto& g = std::get<GeomTail>(tail);
      return GeomTail{g.limit + t, g.ratio};
    };
    std::optional<Tail> down;
    if (down_) down = shift_tail(*down_);
    return Frame(kind_, first_, std::move(pts), shift_tail(up_), std::move(down));
  }

  /// The common spacing when the frame is one arithmetic progression end to end.
  std::optional<Rational> uniform_step() const {
    const auto* up = std::get_if<ArithTail>(&up_);
    if (!up) return std::nullopt;
    if (kind_ == IndexKind::integers) {
      const auto* down = std::get_if<ArithTail>(&*down_);
      if (!down || down->step != up->step) return std::nullopt;
    }
    for (std::size_t k = 1; k < points_.size(); ++k)
      if (points_[k] - points_[k - 1] != up->step) return std::nullopt;
    return up->step;
  }

  bool operator==(const Frame& o) const {
    return kind_ == o.kind_ && first_ == o.first_ && points_ == o.points_ && up_ == o.up_ &&
           down_ == o.down_;
  }

 private:
  // signed_offset > 0 walks the upward tail, < 0 the downward one; for
  // geometric tails the limit's side encodes the direction.
  static Rational tail_point(const Rational& anchor, const Tail& tail,
                             std::int64_t signed_offset) {
    if (const auto* a = std::get_if<ArithTail>(&tail))
      return anchor + Rational(signed_offset) * a->step;
    const auto& g = std::get<GeomTail>(tail);
    const std::int64_t steps = signed_offset < 0 ? -signed_offset : signed_offset;
    return g.limit - (g.limit - anchor) * rpow(g.ratio, steps);
  }

  static Tail retime_tail(const Tail& tail, std::int64_t stride) {
    if (const auto* a = std::get_if<ArithTail>(&tail)) return ArithTail{a->step * Rational(stride)};
    const auto& g = std::get<GeomTail>(tail);
    return GeomTail{g.limit, rpow(g.ratio, stride)};
  }

  std::optional<std::int64_t> locate_up(const Rational& x) const {
    const std::int64_t hi = last_explicit_index();
    const Rational& anchor = points_.back();
    if (const auto* a = std::get_if<ArithTail>(&up_)) {
      Integer k = rfloor((x - anchor) / a->step);
      return hi + k.convert_to<std::int64_t>();
    }
    const auto& g = std::get<GeomTail>(up_);
    if (x >= g.limit) return std::nullopt;
    // walk k up until point(hi+k+1) > x; the gap to the limit halves each step
    std::int64_t k = 0;
    Rational next_gap = (g.limit - anchor) * g.ratio;
    while (g.limit - next_gap <= x) {
      ++k;
      next_gap *= g.ratio;
    }
    return hi + k;
  }

  std::optional<std::int64_t> locate_down(const Rational& x) const {
    const Rational& anchor = points_.front();
    if (const auto* a = std::get_if<ArithTail>(&*down_)) {
      Integer k = rceil((anchor - x) / a->step);
      return first_ - k.convert_to<std::int64_t>();
    }
    const auto& g = std::get<GeomTail>(*down_);
    if (x < g.limit) return std::nullopt;
    // x == limit is outside: blocks never reach down to the limit itself
    if (x == g.limit) return std::nullopt;
    std::int64_t k = 1;
    Rational gap = (anchor - g.limit) * g.ratio;  // anchor - point(first-1) distance factor
    while (g.limit + gap > x) {
      ++k;
      gap *= g.ratio;
    }
    return first_ - k;
  }

  void validate() const {
    if (points_.empty()) throw DomainError("frame: at least one explicit point required");
    for (std::size_t k = 1; k < points_.size(); ++k)
      if (!(points_[k - 1] < points_[k])) throw DomainError("frame: points must strictly increase");
    if (kind_ == IndexKind::naturals) {
      if (first_ != 0) throw DomainError("frame: naturals frame must start at index 0");
      if (down_) throw DomainError("frame: naturals frame has no downward tail");
    } else if (!down_) {
      throw DomainError("frame: integers frame needs a downward tail");
    }
    check_tail(points_.back(), up_, /*upward=*/true);
    if (down_) check_tail(points_.front(), *down_, /*upward=*/false);
  }

  static void check_tail(const Rational& anchor, const Tail& tail, bool upward) {
    if (const auto* a = std::get_if<ArithTail>(&tail)) {
      if (a->step <= 0) throw DomainError("frame: tail step must be positive");
      return;
    }
    const auto& g = std::get<GeomTail>(tail);
    if (!(g.ratio > 0 && g.ratio < 1)) throw DomainError("frame: geometric ratio must be in (0,1)");
    if (upward ? !(g.limit > anchor) : !(g.limit < anchor))
      throw DomainError("frame: geometric limit must lie beyond the explicit points");
  }

  // Shrink the explicit window while boundary points match the tail rule, so
  // equal point sequences compare equal.
  void canonicalize() {
    while (points_.size() > 1) {
      const Rational predicted =
          tail_point(points_[points_.size() - 2], up_, 1);
      if (predicted != points_.back()) break;
      points_.pop_back();
    }
    while (down_ && points_.size() > 1) {
      const Rational predicted = tail_point(points_[1], *down_, -1);
      if (predicted != points_.front()) break;
      points_.erase(points_.begin());
      ++first_;
    }
  }

  IndexKind kind_;
  std::int64_t first_;
  std::vector<Rational> points_;
  Tail up_;
  std::optional<Tail> down_;
};

}  // namespace ordfree
