#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "ordfree/word.hpp"

namespace ordfree {

struct WitnessBudget {
  std::size_t max_windows = 8;       // expanding window rounds
  std::size_t grid_density = 12;     // mediant tree nodes explored per gap
  std::size_t max_candidates = 50000;
  Interval initial_window = Interval::closed(Rational(-8), Rational(8));
};

// A verified nontriviality certificate: an explicit point the word moves.
// Exhaustion is explicitly inconclusive; nothing here ever claims a word is
// the identity.
struct WitnessResult {
  bool found = false;
  Rational point;
  Rational image;
  std::size_t candidates_tried = 0;
  std::size_t windows_used = 0;
};

namespace detail {

/// Stern-Brocot style refinement: mediants of reduced fractions enumerate
/// every rational strictly between lo and hi in the limit.
inline Rational mediant(const Rational& a, const Rational& b) {
  return Rational(numerator(a) + numerator(b), denominator(a) + denominator(b));
}

/// Simple rationals first: candidates are ranked by denominator and then
/// numerator size, so witnesses come out small and evaluations stay cheap.
inline bool simpler(const Rational& a, const Rational& b) {
  const Integer da = denominator(a), db = denominator(b);
  if (da != db) return da < db;
  Integer na = numerator(a), nb = numerator(b);
  if (na < 0) na = -na;
  if (nb < 0) nb = -nb;
  if (na != nb) return na < nb;
  return a < b;
}

class MovedPointSearch {
 public:
  MovedPointSearch(const Action& action, const Word& word, const WitnessBudget& budget)
      : action_(action), word_(word), budget_(budget) {}

  std::optional<Rational> try_candidate(const Rational& x) {
    ++result_.candidates_tried;
    if (eval_word(action_, word_, x) != x) return x;
    return std::nullopt;
  }

  bool budget_left() const { return result_.candidates_tried < budget_.max_candidates; }

  std::optional<Rational> search_window(const Interval& window) {
    // phase 1: breakpoints of the involved descriptors, then window ends
    std::vector<Rational> pts;
    for (const auto& l : word_.letters())
      action_.at(l.gen).breakpoints_in(window, pts, budget_.max_candidates / 4);
    if (window.lo) pts.push_back(*window.lo);
    if (window.hi) pts.push_back(*window.hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Rational> order = pts;
    std::sort(order.begin(), order.end(), simpler);
    for (const auto& x : order) {
      if (!budget_left()) return std::nullopt;
      if (auto hit = try_candidate(x)) return hit;
    }
    // phase 2: midpoints of consecutive candidates
    std::vector<std::pair<Rational, Rational>> gaps;
    std::vector<Rational> mids;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      Rational mid = (pts[k - 1] + pts[k]) / 2;
      gaps.emplace_back(pts[k - 1], mid);
      gaps.emplace_back(mid, pts[k]);
      mids.push_back(std::move(mid));
    }
    std::sort(mids.begin(), mids.end(), simpler);
    for (const auto& x : mids) {
      if (!budget_left()) return std::nullopt;
      if (auto hit = try_candidate(x)) return hit;
    }
    // phase 3: mediant refinement inside each gap, breadth first,
    // simplest gap endpoints first
    std::sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) {
      const Rational& wa = simpler(a.first, a.second) ? a.second : a.first;
      const Rational& wb = simpler(b.first, b.second) ? b.second : b.first;
      return simpler(wa, wb);
    });
    for (const auto& [lo, hi] : gaps) {
      std::deque<std::pair<Rational, Rational>> queue{{lo, hi}};
      for (std::size_t n = 0; n < budget_.grid_density && !queue.empty(); ++n) {
        auto [a, b] = queue.front();
        queue.pop_front();
        if (!budget_left()) return std::nullopt;
        Rational m = mediant(a, b);
        if (auto hit = try_candidate(m)) return hit;
        queue.emplace_back(a, m);
        queue.emplace_back(m, b);
      }
    }
    return std::nullopt;
  }

  WitnessResult take_result() { return std::move(result_); }
  WitnessResult result_;

 private:
  const Action& action_;
  const Word& word_;
  const WitnessBudget& budget_;
};

}  // namespace detail

/// Search for a moved point of a reduced nonempty word inside one fixed
/// bounded window (no expansion).
inline WitnessResult find_moved_point_in(const Action& action, const Word& word,
                                         const Interval& window, const WitnessBudget& budget) {
  Word w = reduce(word);
  if (w.empty()) throw DomainError("witness: empty word after reduction");
  detail::MovedPointSearch search(action, w, budget);
  auto hit = search.search_window(window);
  WitnessResult r = search.take_result();
  r.windows_used = 1;
  if (hit) {
    r.found = true;
    r.point = *hit;
    r.image = eval_word(action, w, *hit);
    if (r.image == r.point) throw DomainError("witness: verification failed");  // unreachable
  }
  return r;
}

/// Moved-point witness over expanding windows that alternate sides. A
/// returned point is re-verified exactly; exhaustion is inconclusive.
inline WitnessResult nontriviality_witness(const Action& action, const Word& word,
                                           const WitnessBudget& budget = {}) {
  Word w = reduce(word);
  if (w.empty()) throw DomainError("witness: empty word after reduction");
  for (const auto& l : w.letters())
    if (!action.bound(l.gen)) throw DomainError("witness: unbound letter '" + l.gen.str() + "'");
  detail::MovedPointSearch search(action, w, budget);
  Interval window = budget.initial_window;
  if (!window.bounded()) throw DomainError("witness: initial window must be bounded");
  std::size_t windows = 0;
  std::optional<Rational> hit;
  for (; windows < budget.max_windows && search.budget_left(); ++windows) {
    hit = search.search_window(window);
    if (hit) break;
    Rational span = window.width();
    if (windows % 2 == 0)
      window = Interval::closed(*window.lo, *window.hi + span);  // extend right
    else
      window = Interval::closed(*window.lo - span, *window.hi);  // extend left
  }
  WitnessResult r = search.take_result();
  r.windows_used = windows + (hit ? 1 : 0);
  if (hit) {
    r.found = true;
    r.point = *hit;
    r.image = eval_word(action, w, *hit);
    if (r.image == r.point) throw DomainError("witness: verification failed");  // unreachable
  }
  return r;
}

}  // namespace ordfree
