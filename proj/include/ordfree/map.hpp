#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ordfree/blockset.hpp"
#include "ordfree/frame.hpp"
#include "ordfree/interval.hpp"
#include "ordfree/interval_set.hpp"
#include "ordfree/piecewise.hpp"

namespace ordfree {

// ---------------------------------------------------------------------------
// Declared support
// ---------------------------------------------------------------------------

// Where a descriptor is allowed to move points: a symbolic superset of the
// actual moved set, carried by the descriptor rather than recomputed, so that
// disjoint patching has something decidable to check. Probing verifies
// declarations, it never defines them.
class DeclaredSupport {
 public:
  struct All {
    bool operator==(const All&) const = default;
  };
  using Region = std::variant<All, Interval, BlockSet>;

  DeclaredSupport() = default;  // empty support

  static DeclaredSupport empty() { return DeclaredSupport(); }
  static DeclaredSupport everything() { return DeclaredSupport(std::vector<Region>{All{}}); }
  static DeclaredSupport interval(Interval v) {
    return DeclaredSupport(std::vector<Region>{std::move(v)});
  }
  static DeclaredSupport blocks(BlockSet bs) {
    return DeclaredSupport(std::vector<Region>{std::move(bs)});
  }
  static DeclaredSupport union_of(std::vector<DeclaredSupport> parts) {
    std::vector<Region> regions;
    for (auto& p : parts)
      for (auto& r : p.regions_) regions.push_back(std::move(r));
    return DeclaredSupport(std::move(regions));
  }

  bool is_empty() const { return regions_.empty(); }
  bool is_everything() const {
    for (const auto& r : regions_)
      if (std::holds_alternative<All>(r)) return true;
    return false;
  }
  const std::vector<Region>& regions() const { return regions_; }

  bool contains(const Rational& x) const {
    for (const auto& r : regions_) {
      if (std::holds_alternative<All>(r)) return true;
      if (const auto* v = std::get_if<Interval>(&r)) {
        if (v->contains(x)) return true;
      } else if (std::get<BlockSet>(r).contains_point(x)) {
        return true;
      }
    }
    return false;
  }

  DeclaredSupport shifted(const Rational& t) const {
    std::vector<Region> out;
    for (const auto& r : regions_) {
      if (std::holds_alternative<All>(r)) {
        out.push_back(All{});
      } else if (const auto* v = std::get_if<Interval>(&r)) {
        Interval s = *v;
        if (s.lo) s.lo = *s.lo + t;
        if (s.hi) s.hi = *s.hi + t;
        out.push_back(std::move(s));
      } else {
        const auto& bs = std::get<BlockSet>(r);
        out.push_back(BlockSet(bs.frame.shifted(t), bs.selector));
      }
    }
    return DeclaredSupport(std::move(out));
  }

 private:
  explicit DeclaredSupport(std::vector<Region> regions) : regions_(std::move(regions)) {}
  std::vector<Region> regions_;
};

namespace detail {

inline bool regions_disjoint(const DeclaredSupport::Region& a, const DeclaredSupport::Region& b) {
  using All = DeclaredSupport::All;
  if (std::holds_alternative<All>(a) || std::holds_alternative<All>(b)) return false;
  const auto* ia = std::get_if<Interval>(&a);
  const auto* ib = std::get_if<Interval>(&b);
  const auto* ba = std::get_if<BlockSet>(&a);
  const auto* bb = std::get_if<BlockSet>(&b);
  if (ia && ib) return !intervals_intersect(*ia, *ib);
  if (ia && bb) return !blocks_meet_interval(*bb, *ia);
  if (ba && ib) return !blocks_meet_interval(*ba, *ib);
  if (ba->same_frame(*bb)) return blocksets_disjoint(*ba, *bb);
  throw UnsupportedError("support disjointness over different frames");
}

}  // namespace detail

/// Symbolic disjointness of declared supports. Throws UnsupportedError when
/// the combination is outside the decidable fragment.
inline bool supports_disjoint(const DeclaredSupport& a, const DeclaredSupport& b) {
  if (a.is_empty() || b.is_empty()) return true;
  for (const auto& ra : a.regions())
    for (const auto& rb : b.regions())
      if (!detail::regions_disjoint(ra, rb)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Descriptor nodes
// ---------------------------------------------------------------------------

enum class MapKind { identity, affine, finite, periodic, conjugate, lazy, patched, composed };

class MapNode;
using MapNodePtr = std::shared_ptr<const MapNode>;
class MapDescriptor;

class MapNode {
 public:
  virtual ~MapNode() = default;
  virtual MapKind kind() const = 0;
  virtual Rational eval(const Rational& x) const = 0;
  virtual Rational eval_inverse(const Rational& y) const = 0;
  virtual DeclaredSupport support() const = 0;
  /// Candidate sample points for searches: breakpoints within a bounded
  /// window. Best effort under cap; not required to be exhaustive.
  virtual void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                              std::size_t cap) const = 0;
  /// Exact affine pieces tiling a bounded window, or false when more than cap
  /// pieces would be needed (geometric accumulation, deep words).
  virtual bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                         std::size_t cap) const = 0;
};

// A symbolic order-automorphism of the rational line. Immutable value type;
// copies share nodes.
class MapDescriptor {
 public:
  MapDescriptor();  // identity

  explicit MapDescriptor(MapNodePtr node) : node_(std::move(node)) {}

  Rational eval(const Rational& x) const { return node_->eval(x); }
  Rational eval_inverse(const Rational& y) const { return node_->eval_inverse(y); }
  Rational operator()(const Rational& x) const { return eval(x); }

  /// Exact image interval; endpoint openness is preserved since descriptors
  /// are continuous increasing bijections of the line.
  Interval image(const Interval& j) const {
    Interval out;
    if (j.lo) out.lo = eval(*j.lo);
    if (j.hi) out.hi = eval(*j.hi);
    out.lo_closed = j.lo_closed;
    out.hi_closed = j.hi_closed;
    return out;
  }

  Interval preimage(const Interval& j) const {
    Interval out;
    if (j.lo) out.lo = eval_inverse(*j.lo);
    if (j.hi) out.hi = eval_inverse(*j.hi);
    out.lo_closed = j.lo_closed;
    out.hi_closed = j.hi_closed;
    return out;
  }

  DeclaredSupport support() const { return node_->support(); }
  MapKind kind() const { return node_->kind(); }
  const MapNode& node() const { return *node_; }
  const MapNodePtr& node_ptr() const { return node_; }

  void breakpoints_in(const Interval& window, std::vector<Rational>& out, std::size_t cap) const {
    node_->breakpoints_in(window, out, cap);
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out, std::size_t cap) const {
    return node_->pieces_in(window, out, cap);
  }

  bool is_identity_node() const { return kind() == MapKind::identity; }

  // factories are defined after the node classes
  static MapDescriptor identity();
  static MapDescriptor affine(Rational slope, Rational intercept);
  static MapDescriptor finite(PiecewiseLinear pl);
  static MapDescriptor periodic(Rational period, PiecewiseLinear pattern);
  static MapDescriptor conjugate_by_shift(MapDescriptor inner, Rational shift);
  static MapDescriptor lazy(Frame frame, std::shared_ptr<const class BlockRule> rule);
  static MapDescriptor patched(std::vector<struct PatchPart> parts);
  static MapDescriptor composed(std::vector<std::pair<MapDescriptor, std::int64_t>> factors);

 private:
  MapNodePtr node_;
};

/// One patch: a map that carries its region onto itself, applied there only.
struct PatchPart {
  DeclaredSupport region;
  MapDescriptor map;
};

// Assigns each block of a frame a descriptor confined to that block. Rules
// are named constructions so lazy descriptors stay serializable.
class BlockRule {
 public:
  virtual ~BlockRule() = default;
  virtual const char* rule_name() const = 0;
  /// Descriptor confined to the given block (identity where inactive).
  virtual MapDescriptor at(std::int64_t block) const = 0;
  virtual DeclaredSupport support(const Frame& frame) const {
    return DeclaredSupport::interval(frame.hull());
  }
};

namespace detail {

// Blocks of `frame` meeting a bounded window, ascending. `complete` reports
// whether the enumeration is exhaustive (it cannot be across a geometric
// accumulation point under the cap).
inline std::vector<std::int64_t> blocks_overlapping(const Frame& frame, const Interval& window,
                                                    std::size_t cap, bool& complete) {
  complete = true;
  if (!window.bounded()) throw DomainError("blocks_overlapping: window must be bounded");
  if (!intervals_intersect(window, frame.hull())) return {};
  auto lo = frame.locate(*window.lo);
  auto hi = frame.locate(*window.hi);
  std::int64_t i1, i2;
  if (lo) {
    i1 = *lo;
  } else if (frame.kind() == Frame::IndexKind::naturals) {
    i1 = 0;
  } else {
    i1 = frame.first_explicit_index() - static_cast<std::int64_t>(cap);
    complete = false;
  }
  if (hi) {
    i2 = *hi;
    // a window ending exactly at a block's left edge does not meet that block
    if (!window.hi_closed && frame.point(i2) == *window.hi) --i2;
  } else {
    i2 = frame.last_explicit_index() + static_cast<std::int64_t>(cap);
    complete = false;
  }
  if (i2 < i1) return {};
  if (static_cast<std::uint64_t>(i2 - i1) + 1 > cap) {
    complete = false;
    i2 = i1 + static_cast<std::int64_t>(cap) - 1;
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(i2 - i1 + 1));
  for (std::int64_t i = i1; i <= i2; ++i) out.push_back(i);
  return out;
}

// Sorts pieces by domain and fills uncovered stretches of the window with
// identity pieces, producing an exact tiling.
inline std::vector<AffinePiece> tile_window(const Interval& window,
                                            std::vector<AffinePiece> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const AffinePiece& a, const AffinePiece& b) {
    return detail::cmp_lower(a.dom, b.dom) < 0;
  });
  std::vector<AffinePiece> out;
  std::optional<Rational> cursor = window.lo;
  bool cursor_closed = window.lo_closed;
  auto push_identity_up_to = [&](const std::optional<Rational>& to, bool to_closed) {
    if (!to) return;
    if (cursor && *cursor > *to) return;
    if (cursor && *cursor == *to && !(cursor_closed && to_closed)) return;
    out.push_back(AffinePiece{Interval::make(cursor, cursor_closed, to, to_closed), 1, 0});
  };
  for (auto& p : pieces) {
    push_identity_up_to(p.dom.lo, !p.dom.lo_closed);
    cursor = p.dom.hi;
    cursor_closed = !p.dom.hi_closed;
    out.push_back(std::move(p));
  }
  push_identity_up_to(window.hi, window.hi_closed);
  return out;
}

}  // namespace detail

// --- node implementations ---------------------------------------------------

class IdentityNode final : public MapNode {
 public:
  MapKind kind() const override { return MapKind::identity; }
  Rational eval(const Rational& x) const override { return x; }
  Rational eval_inverse(const Rational& y) const override { return y; }
  DeclaredSupport support() const override { return DeclaredSupport::empty(); }
  void breakpoints_in(const Interval&, std::vector<Rational>&, std::size_t) const override {}
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t) const override {
    out.push_back(AffinePiece{window, 1, 0});
    return true;
  }
};

/// Global affine map x -> slope*x + intercept with slope > 0. Not the
/// identity outside any bound; used as a patching ingredient.
class AffineNode final : public MapNode {
 public:
  AffineNode(Rational slope, Rational intercept)
      : slope_(std::move(slope)), intercept_(std::move(intercept)) {
    if (!(slope_ > 0)) throw DomainError("affine: slope must be positive");
  }
  MapKind kind() const override { return MapKind::affine; }
  Rational eval(const Rational& x) const override { return slope_ * x + intercept_; }
  Rational eval_inverse(const Rational& y) const override { return (y - intercept_) / slope_; }
  DeclaredSupport support() const override {
    if (slope_ == 1 && intercept_ == 0) return DeclaredSupport::empty();
    return DeclaredSupport::everything();
  }
  void breakpoints_in(const Interval&, std::vector<Rational>&, std::size_t) const override {}
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t) const override {
    out.push_back(AffinePiece{window, slope_, intercept_});
    return true;
  }
  const Rational& slope() const { return slope_; }
  const Rational& intercept() const { return intercept_; }

 private:
  Rational slope_, intercept_;
};

class FinitePLNode final : public MapNode {
 public:
  explicit FinitePLNode(PiecewiseLinear pl) : pl_(std::move(pl)) {
    if (pl_.is_identity()) throw DomainError("finite: identity descriptor; use identity()");
  }
  MapKind kind() const override { return MapKind::finite; }
  Rational eval(const Rational& x) const override { return pl_.eval(x); }
  Rational eval_inverse(const Rational& y) const override { return pl_.eval_inverse(y); }
  DeclaredSupport support() const override {
    return DeclaredSupport::interval(Interval::open(pl_.xs().front(), pl_.xs().back()));
  }
  void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                      std::size_t cap) const override {
    for (const auto& x : pl_.xs()) {
      if (out.size() >= cap) return;
      if (window.contains(x)) out.push_back(x);
    }
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t cap) const override {
    std::vector<AffinePiece> mine;
    for (std::size_t k = 0; k < pl_.piece_count(); ++k) {
      AffinePiece p = pl_.piece(k);
      if (auto dom = intersect(p.dom, window)) {
        if (mine.size() >= cap) return false;
        mine.push_back(AffinePiece{*dom, p.slope, p.intercept});
      }
    }
    for (auto& p : detail::tile_window(window, std::move(mine))) out.push_back(std::move(p));
    return true;
  }
  const PiecewiseLinear& pl() const { return pl_; }

 private:
  PiecewiseLinear pl_;
};

/// f(x + p) = f(x) + p, given by a pattern fixing 0 and p on [0, p].
class PeriodicNode final : public MapNode {
 public:
  PeriodicNode(Rational period, PiecewiseLinear pattern)
      : period_(std::move(period)), pattern_(std::move(pattern)) {
    if (!(period_ > 0)) throw DomainError("periodic: period must be positive");
    if (pattern_.is_identity()) throw DomainError("periodic: identity pattern; use identity()");
    if (pattern_.xs().front() < 0 || pattern_.xs().back() > period_)
      throw DomainError("periodic: pattern must live on [0, period]");
  }
  MapKind kind() const override { return MapKind::periodic; }
  Rational eval(const Rational& x) const override {
    Integer k = rfloor(x / period_);
    Rational off = Rational(k) * period_;
    return pattern_.eval(x - off) + off;
  }
  Rational eval_inverse(const Rational& y) const override {
    Integer k = rfloor(y / period_);
    Rational off = Rational(k) * period_;
    return pattern_.eval_inverse(y - off) + off;
  }
  DeclaredSupport support() const override { return DeclaredSupport::everything(); }
  void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                      std::size_t cap) const override {
    if (!window.bounded()) throw DomainError("breakpoints_in: window must be bounded");
    Integer k1 = rfloor(*window.lo / period_);
    Integer k2 = rfloor(*window.hi / period_);
    for (Integer k = k1; k <= k2; ++k) {
      Rational off = Rational(k) * period_;
      Rational cell_end = off + period_;
      if (out.size() < cap && window.contains(off)) out.push_back(off);
      for (const auto& x : pattern_.xs()) {
        if (out.size() >= cap) return;
        Rational t = x + off;
        if (window.contains(t)) out.push_back(t);
      }
      (void)cell_end;
    }
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t cap) const override {
    if (!window.bounded()) throw DomainError("pieces_in: window must be bounded");
    Integer k1 = rfloor(*window.lo / period_);
    Integer k2 = rfloor(*window.hi / period_);
    if (Integer(k2 - k1 + 1) * Integer(pattern_.piece_count() + 2) > Integer(cap)) return false;
    std::vector<AffinePiece> mine;
    for (Integer k = k1; k <= k2; ++k) {
      Rational off = Rational(k) * period_;
      for (std::size_t j = 0; j < pattern_.piece_count(); ++j) {
        AffinePiece p = pattern_.piece(j);
        Interval shifted = Interval::closed(*p.dom.lo + off, *p.dom.hi + off);
        if (auto dom = intersect(shifted, window)) {
          // y = s(x - off) + c + off
          mine.push_back(AffinePiece{*dom, p.slope, p.intercept + off * (1 - p.slope)});
        }
      }
    }
    for (auto& p : detail::tile_window(window, std::move(mine))) out.push_back(std::move(p));
    return true;
  }
  const Rational& period() const { return period_; }
  const PiecewiseLinear& pattern() const { return pattern_; }

 private:
  Rational period_;
  PiecewiseLinear pattern_;
};

/// x -> inner(x - shift) + shift.
class ConjugateNode final : public MapNode {
 public:
  ConjugateNode(MapDescriptor inner, Rational shift)
      : inner_(std::move(inner)), shift_(std::move(shift)) {}
  MapKind kind() const override { return MapKind::conjugate; }
  Rational eval(const Rational& x) const override { return inner_.eval(x - shift_) + shift_; }
  Rational eval_inverse(const Rational& y) const override {
    return inner_.eval_inverse(y - shift_) + shift_;
  }
  DeclaredSupport support() const override { return inner_.support().shifted(shift_); }
  void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                      std::size_t cap) const override {
    std::vector<Rational> inner_pts;
    inner_.breakpoints_in(shift_back(window), inner_pts, cap);
    for (auto& x : inner_pts) {
      if (out.size() >= cap) return;
      out.push_back(x + shift_);
    }
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t cap) const override {
    std::vector<AffinePiece> inner_pieces;
    if (!inner_.pieces_in(shift_back(window), inner_pieces, cap)) return false;
    for (auto& p : inner_pieces) {
      Interval dom = p.dom;
      if (dom.lo) dom.lo = *dom.lo + shift_;
      if (dom.hi) dom.hi = *dom.hi + shift_;
      out.push_back(
          AffinePiece{std::move(dom), p.slope, p.intercept + shift_ * (1 - p.slope)});
    }
    return true;
  }
  const MapDescriptor& inner() const { return inner_; }
  const Rational& shift() const { return shift_; }

 private:
  Interval shift_back(const Interval& w) const {
    Interval v = w;
    if (v.lo) v.lo = *v.lo - shift_;
    if (v.hi) v.hi = *v.hi - shift_;
    return v;
  }
  MapDescriptor inner_;
  Rational shift_;
};

/// Blockwise map over a frame: on block i it acts as rule->at(i), outside the
/// frame's hull it is the identity.
class LazyBlockNode final : public MapNode {
 public:
  LazyBlockNode(Frame frame, std::shared_ptr<const BlockRule> rule)
      : frame_(std::move(frame)), rule_(std::move(rule)) {
    if (!rule_) throw DomainError("lazy: missing block rule");
  }
  MapKind kind() const override { return MapKind::lazy; }
  Rational eval(const Rational& x) const override {
    auto i = frame_.locate(x);
    if (!i) return x;
    return rule_->at(*i).eval(x);
  }
  Rational eval_inverse(const Rational& y) const override {
    auto i = frame_.locate(y);
    if (!i) return y;
    return rule_->at(*i).eval_inverse(y);
  }
  DeclaredSupport support() const override { return rule_->support(frame_); }
  void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                      std::size_t cap) const override {
    // Deep blocks of branch-indexed rules are exponentially expensive to
    // evaluate, so candidate enumeration stays shallow on purpose.
    bool complete = false;
    auto blocks = detail::blocks_overlapping(frame_, window, 8, complete);
    for (auto i : blocks) {
      if (out.size() >= cap) return;
      Rational p = frame_.point(i);
      if (window.contains(p)) out.push_back(p);
    }
    if (blocks.size() <= 4) {
      for (auto i : blocks) {
        if (out.size() >= cap) return;
        if (auto sub = intersect(frame_.block(i), window))
          rule_->at(i).breakpoints_in(*sub, out, cap);
      }
    }
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t cap) const override {
    bool complete = true;
    auto blocks = detail::blocks_overlapping(frame_, window, cap, complete);
    if (!complete) return false;
    std::vector<AffinePiece> mine;
    for (auto i : blocks) {
      if (auto sub = intersect(frame_.block(i), window)) {
        std::vector<AffinePiece> sub_pieces;
        if (!rule_->at(i).pieces_in(*sub, sub_pieces, cap)) return false;
        for (auto& p : sub_pieces) {
          if (!p.is_identity()) mine.push_back(std::move(p));
          if (mine.size() > cap) return false;
        }
      }
    }
    for (auto& p : detail::tile_window(window, std::move(mine))) out.push_back(std::move(p));
    return true;
  }
  const Frame& frame() const { return frame_; }
  const BlockRule& rule() const { return *rule_; }
  const std::shared_ptr<const BlockRule>& rule_ptr() const { return rule_; }

 private:
  Frame frame_;
  std::shared_ptr<const BlockRule> rule_;
};

/// Merge of maps with pairwise disjoint regions, each carrying its region
/// onto itself; identity off the union.
class PatchedNode final : public MapNode {
 public:
  explicit PatchedNode(std::vector<PatchPart> parts) : parts_(std::move(parts)) {
    for (std::size_t a = 0; a < parts_.size(); ++a)
      for (std::size_t b = a + 1; b < parts_.size(); ++b)
        if (!supports_disjoint(parts_[a].region, parts_[b].region))
          throw DomainError("patched: overlapping part regions");
  }
  MapKind kind() const override { return MapKind::patched; }
  Rational eval(const Rational& x) const override {
    for (const auto& part : parts_)
      if (part.region.contains(x)) return part.map.eval(x);
    return x;
  }
  Rational eval_inverse(const Rational& y) const override {
    for (const auto& part : parts_)
      if (part.region.contains(y)) return part.map.eval_inverse(y);
    return y;
  }
  DeclaredSupport support() const override {
    std::vector<DeclaredSupport> regions;
    regions.reserve(parts_.size());
    for (const auto& part : parts_) regions.push_back(part.region);
    return DeclaredSupport::union_of(std::move(regions));
  }
  void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                      std::size_t cap) const override {
    for (const auto& part : parts_) {
      if (out.size() >= cap) return;
      for (const auto& region : part.region.regions()) {
        if (const auto* v = std::get_if<Interval>(&region)) {
          if (v->lo && window.contains(*v->lo) && out.size() < cap) out.push_back(*v->lo);
          if (v->hi && window.contains(*v->hi) && out.size() < cap) out.push_back(*v->hi);
        } else if (const auto* bs = std::get_if<BlockSet>(&region)) {
          for (const auto& blk : bs->blocks_in_window(window, 32)) {
            if (out.size() >= cap) return;
            if (blk.lo) out.push_back(*blk.lo);
          }
        }
      }
      part.map.breakpoints_in(window, out, cap);
    }
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t cap) const override {
    std::vector<AffinePiece> mine;
    for (const auto& part : parts_) {
      for (const auto& region : part.region.regions()) {
        std::vector<Interval> covered;
        if (std::holds_alternative<DeclaredSupport::All>(region)) {
          covered.push_back(window);
        } else if (const auto* v = std::get_if<Interval>(&region)) {
          if (auto sub = intersect(*v, window)) covered.push_back(*sub);
        } else {
          const auto& bs = std::get<BlockSet>(region);
          bool complete = true;
          covered = bs.blocks_in_window(window, cap, complete);
          if (!complete) return false;
        }
        for (const auto& sub : covered) {
          std::vector<AffinePiece> sub_pieces;
          if (!part.map.pieces_in(sub, sub_pieces, cap)) return false;
          for (auto& p : sub_pieces) {
            if (!p.is_identity()) mine.push_back(std::move(p));
            if (mine.size() > cap) return false;
          }
        }
      }
    }
    for (auto& p : detail::tile_window(window, std::move(mine))) out.push_back(std::move(p));
    return true;
  }
  const std::vector<PatchPart>& parts() const { return parts_; }

 private:
  std::vector<PatchPart> parts_;
};

/// A word in other descriptors, applied right to left; exponents repeat a
/// factor or its inverse.
class ComposedNode final : public MapNode {
 public:
  using Factor = std::pair<MapDescriptor, std::int64_t>;
  explicit ComposedNode(std::vector<Factor> factors) : factors_(std::move(factors)) {
    for (const auto& [d, e] : factors_) {
      (void)d;
      if (e == 0) throw DomainError("composed: zero exponent factor");
      if (e > (std::int64_t{1} << 20) || e < -(std::int64_t{1} << 20))
        throw DomainError("composed: exponent too large to evaluate");
    }
  }
  MapKind kind() const override { return MapKind::composed; }
  Rational eval(const Rational& x) const override {
    Rational v = x;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) v = apply(*it, v, false);
    return v;
  }
  Rational eval_inverse(const Rational& y) const override {
    Rational v = y;
    for (const auto& f : factors_) v = apply(f, v, true);
    return v;
  }
  DeclaredSupport support() const override {
    std::vector<DeclaredSupport> parts;
    parts.reserve(factors_.size());
    for (const auto& [d, e] : factors_) {
      (void)e;
      parts.push_back(d.support());
    }
    return DeclaredSupport::union_of(std::move(parts));
  }
  void breakpoints_in(const Interval& window, std::vector<Rational>& out,
                      std::size_t cap) const override {
    for (const auto& [d, e] : factors_) {
      (void)e;
      if (out.size() >= cap) return;
      d.breakpoints_in(window, out, cap);
    }
  }
  bool pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                 std::size_t cap) const override;
  const std::vector<Factor>& factors() const { return factors_; }

 private:
  static Rational apply(const Factor& f, Rational v, bool invert) {
    std::int64_t e = invert ? -f.second : f.second;
    std::int64_t n = e < 0 ? -e : e;
    for (std::int64_t k = 0; k < n; ++k) {
      Rational next = e > 0 ? f.first.eval(v) : f.first.eval_inverse(v);
      if (next == v) return v;  // fixed points stay fixed under every power
      v = std::move(next);
    }
    return v;
  }
  std::vector<Factor> factors_;
};

// --- factories ---------------------------------------------------------------

inline MapDescriptor::MapDescriptor() : node_(std::make_shared<IdentityNode>()) {}
inline MapDescriptor MapDescriptor::identity() { return MapDescriptor(); }
inline MapDescriptor MapDescriptor::affine(Rational slope, Rational intercept) {
  if (slope == 1 && intercept == 0) return identity();
  return MapDescriptor(std::make_shared<AffineNode>(std::move(slope), std::move(intercept)));
}
inline MapDescriptor MapDescriptor::finite(PiecewiseLinear pl) {
  if (pl.is_identity()) return identity();
  return MapDescriptor(std::make_shared<FinitePLNode>(std::move(pl)));
}
inline MapDescriptor MapDescriptor::periodic(Rational period, PiecewiseLinear pattern) {
  if (pattern.is_identity()) return identity();
  return MapDescriptor(std::make_shared<PeriodicNode>(std::move(period), std::move(pattern)));
}
inline MapDescriptor MapDescriptor::conjugate_by_shift(MapDescriptor inner, Rational shift) {
  if (shift == 0 || inner.is_identity_node()) return inner;
  return MapDescriptor(std::make_shared<ConjugateNode>(std::move(inner), std::move(shift)));
}
inline MapDescriptor MapDescriptor::lazy(Frame frame, std::shared_ptr<const BlockRule> rule) {
  return MapDescriptor(std::make_shared<LazyBlockNode>(std::move(frame), std::move(rule)));
}
inline MapDescriptor MapDescriptor::patched(std::vector<PatchPart> parts) {
  if (parts.empty()) return identity();
  return MapDescriptor(std::make_shared<PatchedNode>(std::move(parts)));
}
inline MapDescriptor MapDescriptor::composed(
    std::vector<std::pair<MapDescriptor, std::int64_t>> factors) {
  std::vector<ComposedNode::Factor> kept;
  for (auto& f : factors)
    if (f.second != 0 && !f.first.is_identity_node()) kept.push_back(std::move(f));
  if (kept.empty()) return identity();
  if (kept.size() == 1 && kept[0].second == 1) return kept[0].first;
  return MapDescriptor(std::make_shared<ComposedNode>(std::move(kept)));
}

// --- composed pieces ---------------------------------------------------------

namespace detail {

/// Pieces of d^{-1} tiling the bounded window.
inline bool inverse_pieces_in(const MapDescriptor& d, const Interval& window,
                              std::vector<AffinePiece>& out, std::size_t cap) {
  Interval pre = d.preimage(window);
  std::vector<AffinePiece> forward;
  if (!d.pieces_in(pre, forward, cap)) return false;
  for (auto& p : forward) {
    Interval dom;  // image of p.dom under p = domain of the inverse piece
    if (p.dom.lo) dom.lo = p.eval(*p.dom.lo);
    if (p.dom.hi) dom.hi = p.eval(*p.dom.hi);
    dom.lo_closed = p.dom.lo_closed;
    dom.hi_closed = p.dom.hi_closed;
    out.push_back(AffinePiece{std::move(dom), 1 / p.slope, -p.intercept / p.slope});
  }
  return true;
}

/// Pieces of (g applied after f) from pieces of f, refining the partition at
/// preimages of g's breakpoints. Exact.
inline bool compose_pieces(const std::vector<AffinePiece>& f_pieces, const MapDescriptor& g,
                           bool g_inverted, std::vector<AffinePiece>& out, std::size_t cap) {
  for (const auto& p : f_pieces) {
    Interval img;
    if (p.dom.lo) img.lo = p.eval(*p.dom.lo);
    if (p.dom.hi) img.hi = p.eval(*p.dom.hi);
    img.lo_closed = p.dom.lo_closed;
    img.hi_closed = p.dom.hi_closed;
    std::vector<AffinePiece> g_pieces;
    bool ok = g_inverted ? inverse_pieces_in(g, img, g_pieces, cap)
                         : g.pieces_in(img, g_pieces, cap);
    if (!ok) return false;
    for (const auto& q : g_pieces) {
      // pull q's domain back through p
      Interval dom;
      if (q.dom.lo) dom.lo = (*q.dom.lo - p.intercept) / p.slope;
      if (q.dom.hi) dom.hi = (*q.dom.hi - p.intercept) / p.slope;
      dom.lo_closed = q.dom.lo_closed;
      dom.hi_closed = q.dom.hi_closed;
      if (auto cut = intersect(dom, p.dom)) {
        out.push_back(AffinePiece{*cut, q.slope * p.slope, q.slope * p.intercept + q.intercept});
        if (out.size() > cap) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

inline bool ComposedNode::pieces_in(const Interval& window, std::vector<AffinePiece>& out,
                                    std::size_t cap) const {
  std::vector<AffinePiece> acc{AffinePiece{window, 1, 0}};
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    const auto& [d, e] = *it;
    std::int64_t n = e < 0 ? -e : e;
    for (std::int64_t k = 0; k < n; ++k) {
      std::vector<AffinePiece> next;
      if (!detail::compose_pieces(acc, d, e < 0, next, cap)) return false;
      acc = std::move(next);
    }
  }
  for (auto& p : acc) out.push_back(std::move(p));
  return true;
}

}  // namespace ordfree
