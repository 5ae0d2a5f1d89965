#pragma once

#include <vector>

#include "ordfree/interval_set.hpp"
#include "ordfree/map.hpp"

namespace ordfree {

struct SupportReport {
  Interval window;
  std::vector<Interval> moved_subintervals;   // disjoint, within window
  std::vector<Rational> fixed_points_found;   // isolated fixed points
  bool exact = true;  // false when pieces could not be enumerated under the cap
};

namespace detail {

// Moved subset of one affine piece: everything except the solution of
// slope*x + intercept = x, when that solution lies inside the piece.
inline void moved_within_piece(const AffinePiece& p, std::vector<Interval>& out) {
  if (p.is_identity()) return;
  if (p.slope == 1) {  // pure translation: moves everything
    out.push_back(p.dom);
    return;
  }
  Rational fix = p.intercept / (1 - p.slope);
  if (!p.dom.contains(fix)) {
    out.push_back(p.dom);
    return;
  }
  if (!(p.dom.lo && fix == *p.dom.lo))
    out.push_back(Interval::make(p.dom.lo, p.dom.lo_closed, fix, false));
  if (!(p.dom.hi && fix == *p.dom.hi))
    out.push_back(Interval::make(fix, false, p.dom.hi, p.dom.hi_closed));
}

}  // namespace detail

/// Exact support probe of a bounded window: moved subintervals from the
/// per-piece fixed-point equations, cross-checked on a sampled grid of
/// `density` rationals per piece. Falls back to a sampled (inexact) report
/// when the window's pieces cannot be enumerated under the cap.
inline SupportReport support_probe(const MapDescriptor& d, const Interval& window,
                                   std::size_t density, std::size_t cap = 4096) {
  if (!window.bounded()) throw DomainError("support_probe: window must be bounded");
  SupportReport report;
  report.window = window;

  std::vector<AffinePiece> pieces;
  if (d.pieces_in(window, pieces, cap)) {
    std::vector<Interval> moved_parts;
    for (const auto& p : pieces) detail::moved_within_piece(p, moved_parts);
    IntervalSet moved(std::move(moved_parts));
    // grid cross-check: sampled points must agree with the piece verdicts
    for (const auto& p : pieces) {
      if (!p.dom.bounded()) continue;
      const Rational a = *p.dom.lo, b = *p.dom.hi;
      for (std::size_t k = 0; k <= density; ++k) {
        Rational x = a + (b - a) * Rational(static_cast<std::int64_t>(k),
                                            static_cast<std::int64_t>(density + 1));
        if (!window.contains(x)) continue;
        const bool moves = d.eval(x) != x;
        if (moves != moved.contains(x))
          throw DomainError("support_probe: sampled point contradicts exact pieces");
      }
    }
    report.moved_subintervals = moved.parts();
    IntervalSet fixed = IntervalSet({window}).minus(moved);
    for (const auto& part : fixed.parts())
      if (part.is_point()) report.fixed_points_found.push_back(*part.lo);
    return report;
  }

  // sampled fallback
  report.exact = false;
  std::vector<Rational> grid;
  d.breakpoints_in(window, grid, cap);
  grid.push_back(*window.lo);
  grid.push_back(*window.hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<Rational> samples;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    samples.push_back(grid[i]);
    if (i + 1 < grid.size()) {
      for (std::size_t k = 1; k <= density; ++k)
        samples.push_back(grid[i] + (grid[i + 1] - grid[i]) *
                                        Rational(static_cast<std::int64_t>(k),
                                                 static_cast<std::int64_t>(density + 1)));
    }
  }
  for (const auto& x : samples) {
    if (!window.contains(x)) continue;
    if (d.eval(x) != x) report.moved_subintervals.push_back(Interval::point(x));
  }
  IntervalSet moved(std::move(report.moved_subintervals));
  report.moved_subintervals = moved.parts();
  return report;
}

}  // namespace ordfree
