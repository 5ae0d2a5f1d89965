#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ordfree/cameron.hpp"
#include "ordfree/patch.hpp"

namespace ordfree {

struct OrderedTuple {
  std::vector<Rational> points;

  OrderedTuple() = default;
  explicit OrderedTuple(std::vector<Rational> pts) : points(std::move(pts)) {
    if (points.empty()) throw DomainError("tuple: empty");
    for (std::size_t k = 1; k < points.size(); ++k)
      if (!(points[k - 1] < points[k])) throw DomainError("tuple: points must strictly increase");
  }

  /// Parses `0,1` or `0/1, 5/2, 9`.
  static OrderedTuple parse(std::string_view text) {
    std::vector<Rational> pts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      std::string_view tok =
          text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      pts.push_back(parse_rational(tok));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return OrderedTuple(std::move(pts));
  }

  bool operator<(const OrderedTuple& o) const { return points < o.points; }
  bool operator==(const OrderedTuple& o) const { return points == o.points; }
};

/// A PL element carrying `from` onto `to` coordinate by coordinate, affine
/// between matched points, identity outside the bounded interval `lambda`.
inline MapDescriptor stretch_map(const OrderedTuple& from, const OrderedTuple& to,
                                 const Interval& lambda) {
  if (from.points.size() != to.points.size()) throw DomainError("stretch: tuple length mismatch");
  if (!lambda.bounded()) throw DomainError("stretch: interval must be bounded");
  auto strictly_inside = [&](const Rational& x) { return *lambda.lo < x && x < *lambda.hi; };
  for (const auto& x : from.points)
    if (!strictly_inside(x)) throw DomainError("stretch: tuple point outside the interval");
  for (const auto& x : to.points)
    if (!strictly_inside(x)) throw DomainError("stretch: tuple point outside the interval");
  std::vector<Rational> xs{*lambda.lo}, ys{*lambda.lo};
  xs.insert(xs.end(), from.points.begin(), from.points.end());
  ys.insert(ys.end(), to.points.begin(), to.points.end());
  xs.push_back(*lambda.hi);
  ys.push_back(*lambda.hi);
  return MapDescriptor::finite(PiecewiseLinear(std::move(xs), std::move(ys)));
}

// Injective assignment of generator indices to tuple pairs, deterministic
// under replay: indices are handed out sequentially in query order.
class TupleIndexRegistry {
 public:
  using Key = std::pair<OrderedTuple, OrderedTuple>;

  std::uint64_t lookup_or_assign(const OrderedTuple& from, const OrderedTuple& to) {
    Key key{from, to};
    auto it = assignments_.find(key);
    if (it != assignments_.end()) return it->second;
    std::uint64_t idx = next_++;
    assignments_.emplace(std::move(key), idx);
    order_.push_back(idx);
    return idx;
  }

  std::uint64_t next_index() const { return next_; }
  const std::map<Key, std::uint64_t>& assignments() const { return assignments_; }

  void restore(std::map<Key, std::uint64_t> assignments, std::uint64_t next) {
    assignments_ = std::move(assignments);
    next_ = next;
  }

 private:
  std::uint64_t next_ = 0;
  std::map<Key, std::uint64_t> assignments_;
  std::vector<std::uint64_t> order_;
};

// Lazy rule for the freeness tail: inside every reserved interval (minus the
// ones punched out around a stretch region) install the index-th generator of
// that interval's own branch-indexed family.
class ReservedTailRule final : public BlockRule {
 public:
  ReservedTailRule(BlockSet collection, std::uint64_t index)
      : collection_(std::move(collection)), index_(index) {}
  const char* rule_name() const override { return "reserved_tail"; }
  MapDescriptor at(std::int64_t block) const override {
    if (!collection_.contains_index(block)) return MapDescriptor::identity();
    Interval inside =
        Interval::open(collection_.frame.point(block), collection_.frame.point(block + 1));
    BlockFreeFamily inner(inside, Frame::geometric_naturals_in(inside));
    return cameron_generator(inner, Branch::spike(index_)).descriptor;
  }
  DeclaredSupport support(const Frame& frame) const override {
    return DeclaredSupport::blocks(BlockSet(frame, collection_.selector));
  }
  const BlockSet& collection() const { return collection_; }
  std::uint64_t index() const { return index_; }

 private:
  BlockSet collection_;
  std::uint64_t index_;
};

// Simultaneously free and tuple-transitive generators: each registered tuple
// pair gets the generator that stretches the pair inside a bounding interval
// and acts as the per-interval family element on every reserved interval
// clear of that bounding region.
//
// The reserved collection is fixed as the intervals (k, k+1/2) for integers
// k; query tuples must avoid their interiors.
class TransitiveFreeFamily {
 public:
  explicit TransitiveFreeFamily(std::size_t max_tuple_len = 2)
      : max_len_(max_tuple_len),
        reserved_(Frame::arithmetic(Rational(0), Rational(1, 2)), select_residue(2, {0})) {
    if (max_len_ < 2) throw DomainError("transitive family: max tuple length must be >= 2");
  }

  /// Accept tuples of every length up to n.
  void extend_to(std::size_t n) {
    if (n < 2) throw DomainError("transitive family: extension needs n >= 2");
    max_len_ = std::max(max_len_, n);
  }

  std::size_t max_tuple_len() const { return max_len_; }
  const BlockSet& reserved() const { return reserved_; }
  const TupleIndexRegistry& registry() const { return registry_; }
  TupleIndexRegistry& registry() { return registry_; }

  /// True when x lies strictly inside a reserved interval.
  bool in_reserved_interior(const Rational& x) const {
    auto i = reserved_.frame.locate(x);
    return i && reserved_.contains_index(*i) && x != reserved_.frame.point(*i);
  }

  std::pair<std::uint64_t, MapDescriptor> generator(const OrderedTuple& from,
                                                    const OrderedTuple& to) {
    if (from.points.size() != to.points.size())
      throw DomainError("transitive family: tuple length mismatch");
    if (from.points.size() > max_len_)
      throw DomainError("transitive family: tuple longer than the configured bound");
    for (const auto& x : from.points)
      if (in_reserved_interior(x)) throw DomainError("transitive family: tuple meets a reserved interval");
    for (const auto& x : to.points)
      if (in_reserved_interior(x)) throw DomainError("transitive family: tuple meets a reserved interval");

    const Rational lo = rmin(from.points.front(), to.points.front()) - 1;
    const Rational hi = rmax(from.points.back(), to.points.back()) + 1;
    const Interval lambda = Interval::open(lo, hi);
    MapDescriptor stretch = stretch_map(from, to, lambda);
    const std::uint64_t alpha = registry_.lookup_or_assign(from, to);
    MapDescriptor tail = tail_clear_of(lambda, alpha);
    return {alpha, disjoint_patch({stretch, tail})};
  }

  /// Generator for an index never returned by the registry: the freeness
  /// tail alone, acting in every reserved interval.
  MapDescriptor generator_for_index(std::uint64_t beta) const {
    return MapDescriptor::lazy(reserved_.frame,
                               std::make_shared<ReservedTailRule>(reserved_, beta));
  }

 private:
  MapDescriptor tail_clear_of(const Interval& lambda, std::uint64_t alpha) const {
    // punch out every reserved block whose closure touches the stretch region
    std::vector<std::int64_t> excluded;
    const Frame& fr = reserved_.frame;
    std::int64_t i1 = *fr.locate(*lambda.lo);
    std::int64_t i2 = *fr.locate(*lambda.hi);
    for (std::int64_t i = i1; i <= i2 + 1; ++i) {
      if (!selector_contains(reserved_.selector, i)) continue;
      Interval closure = Interval::closed(fr.point(i), fr.point(i + 1));
      if (intervals_intersect(closure, lambda)) excluded.push_back(i);
    }
    BlockSet cleared(fr, select_residue(2, {0}, std::move(excluded)));
    return MapDescriptor::lazy(fr, std::make_shared<ReservedTailRule>(cleared, alpha));
  }

  std::size_t max_len_;
  BlockSet reserved_;
  TupleIndexRegistry registry_;
};

}  // namespace ordfree
