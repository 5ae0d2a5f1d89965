#pragma once

#include <cstddef>
#include <vector>

#include "ordfree/interval.hpp"
#include "ordfree/rational.hpp"

namespace ordfree {

/// One affine stretch of an order-automorphism: x -> slope*x + intercept on dom.
struct AffinePiece {
  Interval dom;
  Rational slope;      // > 0
  Rational intercept;

  Rational eval(const Rational& x) const { return slope * x + intercept; }
  bool is_identity() const { return slope == 1 && intercept == 0; }
};

// A continuous increasing PL bijection given by breakpoints and their images,
// affine in between, with both bounding endpoints fixed so the map totalizes
// to the whole line as the identity outside [xs.front(), xs.back()].
//
// Canonical form: collinear neighbors merged, identity boundary pieces
// trimmed; the empty list is the identity map. Equality of canonical forms is
// equality as functions.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  PiecewiseLinear(std::vector<Rational> xs, std::vector<Rational> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    validate();
    canonicalize();
  }

  /// Interpolates through the given (x, y) support points.
  static PiecewiseLinear through(std::vector<std::pair<Rational, Rational>> pts) {
    std::vector<Rational> xs, ys;
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    for (auto& [x, y] : pts) {
      xs.push_back(std::move(x));
      ys.push_back(std::move(y));
    }
    return PiecewiseLinear(std::move(xs), std::move(ys));
  }

  bool is_identity() const { return xs_.empty(); }
  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& ys() const { return ys_; }

  /// [xs.front(), xs.back()]; identity outside. Empty map has no bound.
  std::optional<Interval> bound() const {
    if (xs_.empty()) return std::nullopt;
    return Interval::closed(xs_.front(), xs_.back());
  }

  Rational eval(const Rational& x) const {
    if (xs_.empty() || x <= xs_.front() || x >= xs_.back()) return x;
    std::size_t k = segment_index(xs_, x);
    return ys_[k] + (x - xs_[k]) * (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
  }

  Rational eval_inverse(const Rational& y) const {
    if (xs_.empty() || y <= ys_.front() || y >= ys_.back()) return y;
    std::size_t k = segment_index(ys_, y);
    return xs_[k] + (y - ys_[k]) * (xs_[k + 1] - xs_[k]) / (ys_[k + 1] - ys_[k]);
  }

  std::size_t piece_count() const { return xs_.empty() ? 0 : xs_.size() - 1; }

  AffinePiece piece(std::size_t k) const {
    Rational slope = (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
    Rational intercept = ys_[k] - slope * xs_[k];
    return AffinePiece{Interval::closed(xs_[k], xs_[k + 1]), std::move(slope),
                       std::move(intercept)};
  }

  bool operator==(const PiecewiseLinear& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }

 private:
  static std::size_t segment_index(const std::vector<Rational>& v, const Rational& t) {
    std::size_t lo = 0, hi = v.size() - 1;
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (v[mid] <= t)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  void validate() const {
    if (xs_.size() != ys_.size()) throw DomainError("piecewise: point count mismatch");
    if (xs_.size() == 1) throw DomainError("piecewise: need at least two breakpoints");
    for (std::size_t k = 1; k < xs_.size(); ++k) {
      if (!(xs_[k - 1] < xs_[k])) throw DomainError("piecewise: breakpoints must increase");
      if (!(ys_[k - 1] < ys_[k])) throw DomainError("piecewise: images must increase");
    }
    if (!xs_.empty() && (xs_.front() != ys_.front() || xs_.back() != ys_.back()))
      throw DomainError("piecewise: bounding endpoints must be fixed");
  }

  void canonicalize() {
    if (xs_.empty()) return;
    // merge collinear neighbors
    std::vector<Rational> nx{xs_.front()}, ny{ys_.front()};
    for (std::size_t k = 1; k + 1 < xs_.size(); ++k) {
      const Rational left = (ys_[k] - ny.back()) * (xs_[k + 1] - xs_[k]);
      const Rational right = (ys_[k + 1] - ys_[k]) * (xs_[k] - nx.back());
      if (left != right) {
        nx.push_back(xs_[k]);
        ny.push_back(ys_[k]);
      }
    }
    nx.push_back(xs_.back());
    ny.push_back(ys_.back());
    // trim identity pieces at the boundary; they are implied by totalization
    std::size_t lo = 0, hi = nx.size() - 1;
    while (lo < hi && nx[lo] == ny[lo] && nx[lo + 1] == ny[lo + 1]) ++lo;
    while (hi > lo && nx[hi] == ny[hi] && nx[hi - 1] == ny[hi - 1]) --hi;
    if (lo >= hi) {
      xs_.clear();
      ys_.clear();
      return;
    }
    xs_.assign(nx.begin() + static_cast<std::ptrdiff_t>(lo),
               nx.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    ys_.assign(ny.begin() + static_cast<std::ptrdiff_t>(lo),
               ny.begin() + static_cast<std::ptrdiff_t>(hi + 1));
  }

  std::vector<Rational> xs_, ys_;
};

/// Decidable equality of finite descriptors as functions on the whole line.
inline bool finite_pl_equal(const PiecewiseLinear& a, const PiecewiseLinear& b) { return a == b; }

}  // namespace ordfree
