#pragma once

#include <utility>
#include <vector>

#include "ordfree/map.hpp"

namespace ordfree {

namespace detail {

// Flattens segment maps into one PL function through all their breakpoints.
// Seam rule: neighboring segment maps must send the shared endpoint to the
// same point; checked, not assumed.
inline PiecewiseLinear flatten_segments(
    const std::vector<std::pair<Interval, MapDescriptor>>& segments, std::size_t cap) {
  if (segments.empty()) throw DomainError("patch: no segments");
  std::vector<Rational> xs, ys;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& [seg, g] = segments[k];
    if (!seg.bounded() || !seg.lo_closed || !seg.hi_closed || seg.is_point())
      throw DomainError("patch: segments must be closed bounded intervals");
    if (k > 0) {
      const auto& prev = segments[k - 1].first;
      if (*prev.hi != *seg.lo) throw DomainError("patch: segments fail to tile (gap or overlap)");
    }
    std::vector<AffinePiece> pieces;
    if (!g.pieces_in(seg, pieces, cap))
      throw UnsupportedError("patch: segment map has too many pieces to flatten");
    for (const auto& p : pieces) {
      Rational a = *p.dom.lo, b = *p.dom.hi;
      Rational fa = p.eval(a), fb = p.eval(b);
      if (xs.empty()) {
        xs.push_back(a);
        ys.push_back(fa);
      } else if (xs.back() == a) {
        if (ys.back() != fa)
          throw DomainError("patch: endpoint images inconsistent between segments");
      } else {
        throw DomainError("patch: segment pieces fail to tile");
      }
      xs.push_back(b);
      ys.push_back(fb);
    }
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

}  // namespace detail

/// Assembles one element from finitely many segment maps tiling a convex hull
/// inside `region`, identity outside. Segment maps must carry [a_k, a_{k+1}]
/// onto [b_k, b_{k+1}] with matching endpoints, and the hull's outer endpoints
/// must be fixed so the whole line map is a bijection.
inline MapDescriptor piecewise_patch(
    const std::vector<std::pair<Interval, MapDescriptor>>& segments, const Interval& region,
    std::size_t cap = 4096) {
  PiecewiseLinear pl = detail::flatten_segments(segments, cap);
  if (pl.is_identity()) return MapDescriptor::identity();
  const Interval hull =
      Interval::closed(*segments.front().first.lo, *segments.back().first.hi);
  if (!intersect(hull, region) || *intersect(hull, region) != hull)
    throw DomainError("patch: segments leave the patching region");
  if (pl.xs().front() != pl.ys().front() || pl.xs().back() != pl.ys().back())
    throw DomainError("patch: outer endpoints must be fixed for identity outside");
  return MapDescriptor::finite(std::move(pl));
}

/// Periodic variant: the segments tile one cell [t, t+period] carried onto
/// itself; the result repeats with the given period across the line.
inline MapDescriptor piecewise_patch_periodic(
    const std::vector<std::pair<Interval, MapDescriptor>>& cell_segments, const Rational& period,
    std::size_t cap = 4096) {
  if (!(period > 0)) throw DomainError("patch: period must be positive");
  PiecewiseLinear pl = detail::flatten_segments(cell_segments, cap);
  if (pl.is_identity()) return MapDescriptor::identity();
  const Rational t = *cell_segments.front().first.lo;
  const Rational end = *cell_segments.back().first.hi;
  if (end - t != period) throw DomainError("patch: segments must tile one full period cell");
  if (pl.xs().front() != pl.ys().front() || pl.xs().back() != pl.ys().back())
    throw DomainError("patch: cell endpoints must be fixed");
  std::vector<Rational> xs, ys;
  for (const auto& x : pl.xs()) xs.push_back(x - t);
  for (const auto& y : pl.ys()) ys.push_back(y - t);
  return MapDescriptor::conjugate_by_shift(
      MapDescriptor::periodic(period, PiecewiseLinear(std::move(xs), std::move(ys))), t);
}

/// Merge of elements with pairwise disjoint declared supports: agrees with
/// each part on its support, identity otherwise.
inline MapDescriptor disjoint_patch(const std::vector<MapDescriptor>& parts) {
  std::vector<PatchPart> kept;
  for (const auto& d : parts) {
    DeclaredSupport s = d.support();
    if (s.is_empty()) continue;
    kept.push_back(PatchPart{std::move(s), d});
  }
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = a + 1; b < kept.size(); ++b)
      if (!supports_disjoint(kept[a].region, kept[b].region))
        throw DomainError("patch: support overlap detected");
  if (kept.empty()) return MapDescriptor::identity();
  if (kept.size() == 1) return kept[0].map;
  return MapDescriptor::patched(std::move(kept));
}

/// The trivial extension: acts as d on the interval (which d must carry onto
/// itself) and as the identity everywhere else.
inline MapDescriptor restrict_to(const MapDescriptor& d, const Interval& domain) {
  if (d.is_identity_node()) return d;
  Interval img = d.image(domain);
  if (!(img == domain)) throw DomainError("restrict: map does not carry the interval onto itself");
  return MapDescriptor::patched({PatchPart{DeclaredSupport::interval(domain), d}});
}

}  // namespace ordfree
