#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include "ordfree/adfam.hpp"
#include "ordfree/frame.hpp"

namespace ordfree {

// Which blocks of a frame are selected. Residue classes carry an optional
// finite exception list so a periodic family of blocks can be punched out
// around an interval without losing decidability.
struct ResidueSel {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> residues;  // sorted, each in [0, modulus)
  std::vector<std::int64_t> excluded;  // sorted individual indices removed

  bool operator==(const ResidueSel&) const = default;
};
struct FiniteSel {
  std::vector<std::int64_t> indices;  // sorted
  bool operator==(const FiniteSel&) const = default;
};
struct CofiniteSel {
  std::vector<std::int64_t> excluded;  // sorted
  bool operator==(const CofiniteSel&) const = default;
};
struct BranchSel {
  Branch branch;
  bool operator==(const BranchSel&) const = default;
};
using Selector = std::variant<ResidueSel, FiniteSel, CofiniteSel, BranchSel>;

inline Selector select_all() { return ResidueSel{1, {0}, {}}; }
inline Selector select_residue(std::int64_t modulus, std::vector<std::int64_t> residues,
                               std::vector<std::int64_t> excluded = {}) {
  if (modulus <= 0) throw DomainError("selector: modulus must be positive");
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  for (auto r : residues)
    if (r < 0 || r >= modulus) throw DomainError("selector: residue out of range");
  std::sort(excluded.begin(), excluded.end());
  return ResidueSel{modulus, std::move(residues), std::move(excluded)};
}

namespace detail {

inline std::int64_t imod(std::int64_t i, std::int64_t m) {
  std::int64_t r = i % m;
  return r < 0 ? r + m : r;
}

inline bool sorted_contains(const std::vector<std::int64_t>& v, std::int64_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace detail

inline bool selector_contains(const Selector& sel, std::int64_t i) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ResidueSel>) {
          return detail::sorted_contains(s.residues, detail::imod(i, s.modulus)) &&
                 !detail::sorted_contains(s.excluded, i);
        } else if constexpr (std::is_same_v<T, FiniteSel>) {
          return detail::sorted_contains(s.indices, i);
        } else if constexpr (std::is_same_v<T, CofiniteSel>) {
          return !detail::sorted_contains(s.excluded, i);
        } else {
          return i >= 0 && ADSet(s.branch).member(static_cast<std::uint64_t>(i));
        }
      },
      sel);
}

/// True when the selector provably selects infinitely many indices in both
/// directions of Z (used to certify coterminal interval collections).
inline bool selector_coterminal(const Selector& sel) {
  if (const auto* r = std::get_if<ResidueSel>(&sel)) return !r->residues.empty();
  return std::holds_alternative<CofiniteSel>(sel);
}

/// True when the selector provably selects every index.
inline bool selector_is_all(const Selector& sel) {
  if (const auto* r = std::get_if<ResidueSel>(&sel))
    return r->excluded.empty() && static_cast<std::int64_t>(r->residues.size()) == r->modulus;
  if (const auto* c = std::get_if<CofiniteSel>(&sel)) return c->excluded.empty();
  return false;
}

/// An index selected by both, or nullopt when the selectors are provably
/// disjoint. Throws UnsupportedError for branch-vs-residue combinations.
std::optional<std::int64_t> selector_common_index(const Selector& a, const Selector& b);

namespace detail {

inline std::optional<std::int64_t> res_res_common(const ResidueSel& a, const ResidueSel& b) {
  const std::int64_t L = std::lcm(a.modulus, b.modulus);
  const std::int64_t slack =
      static_cast<std::int64_t>(a.excluded.size() + b.excluded.size());
  for (std::int64_t c = 0; c < L; ++c) {
    if (!sorted_contains(a.residues, imod(c, a.modulus))) continue;
    if (!sorted_contains(b.residues, imod(c, b.modulus))) continue;
    for (std::int64_t t = 0; t <= slack; ++t) {
      std::int64_t i = c + L * t;
      if (!sorted_contains(a.excluded, i) && !sorted_contains(b.excluded, i)) return i;
    }
  }
  return std::nullopt;
}

inline std::optional<std::int64_t> scan_finite(const Selector& other,
                                               const std::vector<std::int64_t>& indices) {
  for (auto i : indices)
    if (selector_contains(other, i)) return i;
  return std::nullopt;
}

}  // namespace detail

inline std::optional<std::int64_t> selector_common_index(const Selector& a, const Selector& b) {
  using detail::sorted_contains;
  if (const auto* fa = std::get_if<FiniteSel>(&a)) return detail::scan_finite(b, fa->indices);
  if (const auto* fb = std::get_if<FiniteSel>(&b)) return detail::scan_finite(a, fb->indices);

  const auto* ra = std::get_if<ResidueSel>(&a);
  const auto* rb = std::get_if<ResidueSel>(&b);
  const auto* ca = std::get_if<CofiniteSel>(&a);
  const auto* cb = std::get_if<CofiniteSel>(&b);
  const auto* ba = std::get_if<BranchSel>(&a);
  const auto* bb = std::get_if<BranchSel>(&b);

  if (ra && rb) return detail::res_res_common(*ra, *rb);
  if (ca && cb) {
    std::int64_t start = 0;
    if (!ca->excluded.empty()) start = std::max(start, ca->excluded.back() + 1);
    if (!cb->excluded.empty()) start = std::max(start, cb->excluded.back() + 1);
    return start;
  }
  if ((ra && cb) || (rb && ca)) {
    const ResidueSel& r = ra ? *ra : *rb;
    const CofiniteSel& c = ra ? *cb : *ca;
    if (r.residues.empty()) return std::nullopt;
    ResidueSel widened = r;
    widened.excluded.insert(widened.excluded.end(), c.excluded.begin(), c.excluded.end());
    std::sort(widened.excluded.begin(), widened.excluded.end());
    ResidueSel everything{1, {0}, {}};
    return detail::res_res_common(widened, everything);
  }
  if (ba && bb) {
    if (ba->branch == bb->branch) return static_cast<std::int64_t>(Enumerator(ba->branch).at(0));
    if (common_prefix_length(ba->branch, bb->branch) == 0) return std::nullopt;
    return static_cast<std::int64_t>(Enumerator(ba->branch).at(0));
  }
  if ((ba && cb) || (bb && ca)) {
    const Branch& br = ba ? ba->branch : bb->branch;
    const CofiniteSel& c = ba ? *cb : *ca;
    Enumerator h(br);
    for (std::uint64_t n = 0; n <= c.excluded.size(); ++n) {
      auto k = static_cast<std::int64_t>(h.at(n));
      if (!sorted_contains(c.excluded, k)) return k;
    }
    return std::nullopt;  // unreachable: excluded list is finite
  }
  throw UnsupportedError("selector disjointness undecidable for branch vs residue selectors");
}

/// Complement within the frame's index domain.
inline Selector selector_complement(const Selector& sel) {
  if (const auto* r = std::get_if<ResidueSel>(&sel)) {
    if (!r->excluded.empty())
      throw UnsupportedError("complement of a residue selector with exceptions");
    std::vector<std::int64_t> rest;
    for (std::int64_t c = 0; c < r->modulus; ++c)
      if (!detail::sorted_contains(r->residues, c)) rest.push_back(c);
    return ResidueSel{r->modulus, std::move(rest), {}};
  }
  if (const auto* f = std::get_if<FiniteSel>(&sel)) return CofiniteSel{f->indices};
  if (const auto* c = std::get_if<CofiniteSel>(&sel)) return FiniteSel{c->excluded};
  throw UnsupportedError("complement of a branch selector");
}

// An intensional set of blocks of a frame. Houses both ping-pong table sets
// and interval collections for patched constructions.
struct BlockSet {
  Frame frame;
  Selector selector;

  BlockSet(Frame f, Selector s) : frame(std::move(f)), selector(std::move(s)) {
    if (frame.kind() == Frame::IndexKind::naturals) {
      if (const auto* fin = std::get_if<FiniteSel>(&selector))
        for (auto i : fin->indices)
          if (i < 0) throw DomainError("blockset: negative index on naturals frame");
    }
  }

  static BlockSet all_blocks(Frame f) { return BlockSet(std::move(f), select_all()); }

  bool contains_index(std::int64_t i) const {
    return frame.valid_index(i) && selector_contains(selector, i);
  }

  bool contains_point(const Rational& x) const {
    auto i = frame.locate(x);
    return i && contains_index(*i);
  }

  BlockSet complement() const { return BlockSet(frame, selector_complement(selector)); }

  /// Selected indices within [i1, i2], at most cap of them, ascending.
  std::vector<std::int64_t> indices_in_range(std::int64_t i1, std::int64_t i2,
                                             std::size_t cap) const {
    std::vector<std::int64_t> out;
    if (frame.kind() == Frame::IndexKind::naturals) i1 = std::max<std::int64_t>(i1, 0);
    if (i2 < i1) return out;
    if (const auto* r = std::get_if<ResidueSel>(&selector)) {
      for (auto res : r->residues) {
        std::int64_t first = i1 + detail::imod(res - i1, r->modulus);
        for (std::int64_t i = first; i <= i2; i += r->modulus) {
          if (!detail::sorted_contains(r->excluded, i)) out.push_back(i);
          if (out.size() >= cap * r->residues.size() + 1) break;
        }
      }
      std::sort(out.begin(), out.end());
    } else if (const auto* f = std::get_if<FiniteSel>(&selector)) {
      for (auto i : f->indices)
        if (i >= i1 && i <= i2) out.push_back(i);
    } else if (std::holds_alternative<CofiniteSel>(selector)) {
      for (std::int64_t i = i1; i <= i2 && out.size() < cap; ++i)
        if (selector_contains(selector, i)) out.push_back(i);
    } else {
      const auto& br = std::get<BranchSel>(selector).branch;
      Enumerator h(br);
      for (std::uint64_t n = 0; n < 61; ++n) {
        auto k = static_cast<std::int64_t>(h.at(n));
        if (k > i2) break;
        if (k >= i1) out.push_back(k);
      }
    }
    if (out.size() > cap) out.resize(cap);
    return out;
  }

  /// Selected blocks clipped to a bounded window. Near a geometric
  /// accumulation point the enumeration is necessarily partial; cap bounds it
  /// and `complete` reports whether anything could have been missed.
  std::vector<Interval> blocks_in_window(const Interval& window, std::size_t cap,
                                         bool& complete) const {
    complete = true;
    if (!window.bounded()) throw DomainError("blockset: window must be bounded");
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
    } else {
      i2 = frame.last_explicit_index() + static_cast<std::int64_t>(cap);
      if (frame.hull().hi) complete = false;  // window spans the accumulation point
    }
    auto selected = indices_in_range(i1, i2, cap);
    if (selected.size() >= cap) complete = false;
    std::vector<Interval> out;
    for (auto i : selected) {
      if (auto piece = intersect(frame.block(i), window)) out.push_back(*piece);
    }
    return out;
  }

  std::vector<Interval> blocks_in_window(const Interval& window, std::size_t cap) const {
    bool complete = true;
    return blocks_in_window(window, cap, complete);
  }

  bool same_frame(const BlockSet& o) const { return frame == o.frame; }

  bool operator==(const BlockSet& o) const {
    return frame == o.frame && selector == o.selector;
  }
};

/// A block index in both sets, or nullopt when provably disjoint.
/// Requires the same underlying frame.
inline std::optional<std::int64_t> common_block(const BlockSet& a, const BlockSet& b) {
  if (!a.same_frame(b)) throw DomainError("blockset: mismatched frames");
  auto i = selector_common_index(a.selector, b.selector);
  if (i && !a.frame.valid_index(*i)) return std::nullopt;  // naturals frame, negative hit
  return i;
}

inline bool blocksets_disjoint(const BlockSet& a, const BlockSet& b) {
  return !common_block(a, b).has_value();
}

/// Smallest selected index >= lo, or nullopt when none exists. Exact.
inline std::optional<std::int64_t> first_selected_at_or_above(const Selector& sel,
                                                              std::int64_t lo) {
  if (const auto* r = std::get_if<ResidueSel>(&sel)) {
    std::optional<std::int64_t> best;
    for (auto res : r->residues) {
      std::int64_t i = lo + detail::imod(res - lo, r->modulus);
      while (detail::sorted_contains(r->excluded, i)) i += r->modulus;
      if (!best || i < *best) best = i;
    }
    return best;
  }
  if (const auto* f = std::get_if<FiniteSel>(&sel)) {
    auto it = std::lower_bound(f->indices.begin(), f->indices.end(), lo);
    if (it == f->indices.end()) return std::nullopt;
    return *it;
  }
  if (const auto* c = std::get_if<CofiniteSel>(&sel)) {
    std::int64_t i = lo;
    while (detail::sorted_contains(c->excluded, i)) ++i;
    return i;
  }
  const auto& br = std::get<BranchSel>(sel).branch;
  Enumerator h(br);
  for (std::uint64_t n = 0; n < 61; ++n) {
    auto k = static_cast<std::int64_t>(h.at(n));
    if (k >= lo) return k;
  }
  return std::nullopt;
}

/// Whether some selected index <= bound exists over the given index domain.
inline bool exists_selected_at_most(const Selector& sel, std::int64_t bound,
                                    Frame::IndexKind kind) {
  if (kind == Frame::IndexKind::naturals) {
    auto f = first_selected_at_or_above(sel, 0);
    return f && *f <= bound;
  }
  if (const auto* r = std::get_if<ResidueSel>(&sel)) return !r->residues.empty();
  if (const auto* f = std::get_if<FiniteSel>(&sel))
    return !f->indices.empty() && f->indices.front() <= bound;
  if (std::holds_alternative<CofiniteSel>(sel)) return true;
  auto f = first_selected_at_or_above(sel, 0);
  return f && *f <= bound;
}

/// Whether arbitrarily large selected indices exist.
inline bool selector_unbounded_above(const Selector& sel) {
  if (const auto* r = std::get_if<ResidueSel>(&sel)) return !r->residues.empty();
  if (std::holds_alternative<CofiniteSel>(sel)) return true;
  if (std::holds_alternative<BranchSel>(sel)) return true;  // every prefix encodes
  return false;
}

/// Exact: does any selected block of bs intersect the interval J?
/// The union of a frame's blocks is exactly its hull, so only selected
/// indices near J's ends need individual checks.
inline bool blocks_meet_interval(const BlockSet& bs, const Interval& J) {
  const Frame& fr = bs.frame;
  if (!intervals_intersect(J, fr.hull())) return false;
  std::optional<std::int64_t> i1, i2;  // nullopt = unbounded in that direction
  bool lo_open_ended = !J.lo.has_value();
  bool hi_open_ended = !J.hi.has_value();
  if (!lo_open_ended) {
    i1 = fr.locate(*J.lo);
    if (!i1) lo_open_ended = true;  // J starts below the hull
  }
  if (!hi_open_ended) {
    i2 = fr.locate(*J.hi);
    if (!i2) {
      if (fr.hull().hi && *J.hi >= *fr.hull().hi) {
        hi_open_ended = true;  // J reaches past the hull's top
      } else {
        return false;  // unreachable: J meets hull and J.hi is inside it
      }
    }
  }
  if (lo_open_ended && hi_open_ended) {
    // J covers the whole hull
    if (const auto* f = std::get_if<FiniteSel>(&bs.selector)) return !f->indices.empty();
    return selector_unbounded_above(bs.selector) ||
           first_selected_at_or_above(bs.selector, 0).has_value();
  }
  if (lo_open_ended) {
    // blocks with index < *i2 lie inside J entirely
    if (exists_selected_at_most(bs.selector, *i2 - 1, fr.kind())) return true;
    return bs.contains_index(*i2) && intervals_intersect(fr.block(*i2), J);
  }
  if (hi_open_ended) {
    auto f = first_selected_at_or_above(bs.selector, *i1 + 1);
    if (f) return true;
    return bs.contains_index(*i1) && intervals_intersect(fr.block(*i1), J);
  }
  // bounded: interior blocks are fully inside J
  auto f = first_selected_at_or_above(bs.selector, *i1 + 1);
  if (f && *f <= *i2 - 1 && fr.valid_index(*f)) return true;
  if (bs.contains_index(*i1) && intervals_intersect(fr.block(*i1), J)) return true;
  if (*i2 != *i1 && bs.contains_index(*i2) && intervals_intersect(fr.block(*i2), J)) return true;
  return false;
}

}  // namespace ordfree
