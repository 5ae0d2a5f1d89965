#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordfree/interval_set.hpp"
#include "ordfree/word.hpp"

namespace ordfree {

// One table row: the generator bound to `gen` must satisfy B^c <= f(A).
struct PingPongPair {
  BlockSet A;
  BlockSet B;
  GeneratorId gen;
};

struct PingPongTable {
  std::vector<PingPongPair> pairs;
  Action action;

  const Frame& frame() const {
    if (pairs.empty()) throw DomainError("ping-pong: empty table");
    return pairs.front().A.frame;
  }
};

struct DisjointnessCheck {
  bool pass = false;
  // indices into the flattened set list A_1, B_1, A_2, B_2, ...
  std::optional<std::pair<std::size_t, std::size_t>> offending_sets;
  std::optional<std::int64_t> counterexample_block;
};

struct CoveringCheck {
  bool pass = false;
  bool complement_image_in_B = false;  // f(A^c) <= B
  bool Bc_in_image_of_A = false;       // B^c <= f(A); equivalent through bijectivity
  std::optional<Rational> counterexample;
  std::string method;  // "periodic-window" or "finite-window"
  Rational window_length = 0;
};

// The standard formulations also ask for a point outside all the sets; that
// hypothesis is recorded here informationally and does not flip the verdict.
struct BasePointCheck {
  bool found = false;
  std::optional<Rational> point;
  std::string note;
};

struct PingPongCertificate {
  DisjointnessCheck disjoint;
  std::vector<CoveringCheck> coverings;
  BasePointCheck base_point;
  bool certified = false;
};

namespace detail {

struct FiniteClass {
  Interval bound;  // support inside; identity outside
};
struct PeriodicClass {
  Rational period;
};

/// Classifies a map for certification: identity/finite/periodic through
/// conjugations; translations count as periodic for every period.
inline std::variant<std::monostate, FiniteClass, PeriodicClass> classify_for_certification(
    const MapDescriptor& d, const Rational& fallback_period) {
  switch (d.kind()) {
    case MapKind::identity:
      return FiniteClass{Interval::point(Rational(0))};
    case MapKind::finite: {
      const auto& n = static_cast<const FinitePLNode&>(d.node());
      return FiniteClass{*n.pl().bound()};
    }
    case MapKind::periodic:
      return PeriodicClass{static_cast<const PeriodicNode&>(d.node()).period()};
    case MapKind::affine: {
      const auto& n = static_cast<const AffineNode&>(d.node());
      if (n.slope() == 1) return PeriodicClass{fallback_period};  // translation
      return std::monostate{};
    }
    case MapKind::conjugate: {
      const auto& n = static_cast<const ConjugateNode&>(d.node());
      auto inner = classify_for_certification(n.inner(), fallback_period);
      if (auto* f = std::get_if<FiniteClass>(&inner)) {
        Interval b = f->bound;
        if (b.lo) b.lo = *b.lo + n.shift();
        if (b.hi) b.hi = *b.hi + n.shift();
        return FiniteClass{b};
      }
      return inner;  // periodicity survives translation conjugation
    }
    default:
      return std::monostate{};
  }
}

/// Probes for an index selected by none of the given selectors. Sound and
/// exact: beyond all finite exceptions membership is periodic, so one clean
/// period on each side plus the exceptional indices decide it.
inline std::optional<std::int64_t> uncovered_index(const std::vector<const Selector*>& sels,
                                                   Frame::IndexKind kind) {
  std::int64_t L = 1;
  std::vector<std::int64_t> exceptions;
  for (const auto* s : sels) {
    if (const auto* r = std::get_if<ResidueSel>(s)) {
      L = std::lcm(L, r->modulus);
      for (auto e : r->excluded) exceptions.push_back(e);
    } else if (const auto* f = std::get_if<FiniteSel>(s)) {
      for (auto e : f->indices) exceptions.push_back(e);
    } else if (const auto* c = std::get_if<CofiniteSel>(s)) {
      for (auto e : c->excluded) exceptions.push_back(e);
    } else {
      throw UnsupportedError("base point probe over AD-set selectors");
    }
  }
  auto covered = [&](std::int64_t i) {
    for (const auto* s : sels)
      if (selector_contains(*s, i)) return true;
    return false;
  };
  for (auto e : exceptions) {
    if (kind == Frame::IndexKind::naturals && e < 0) continue;
    if (!covered(e)) return e;
  }
  std::int64_t hi = 0;
  for (auto e : exceptions) hi = std::max(hi, e);
  for (std::int64_t i = hi + 1; i <= hi + L; ++i)
    if (!covered(i)) return i;
  if (kind == Frame::IndexKind::integers) {
    std::int64_t lo = 0;
    for (auto e : exceptions) lo = std::min(lo, e);
    for (std::int64_t i = lo - L; i <= lo - 1; ++i)
      if (!covered(i)) return i;
  }
  return std::nullopt;
}

}  // namespace detail

/// Pairwise disjointness of all table sets, decided by exact residue
/// arithmetic over the lcm of the moduli. AD-set selectors are outside the
/// certified fragment and are reported as unsupported.
inline DisjointnessCheck check_disjoint(const PingPongTable& t) {
  std::vector<const BlockSet*> sets;
  for (const auto& p : t.pairs) {
    sets.push_back(&p.A);
    sets.push_back(&p.B);
  }
  for (const auto* s : sets)
    if (std::holds_alternative<BranchSel>(s->selector))
      throw UnsupportedError("ping-pong disjointness over AD-set selectors");
  DisjointnessCheck out;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      if (auto hit = common_block(*sets[a], *sets[b])) {
        out.pass = false;
        out.offending_sets = {a, b};
        out.counterexample_block = *hit;
        return out;
      }
    }
  }
  out.pass = true;
  return out;
}

/// Verifies B^c <= f(A) and the equivalent f(A^c) <= B by exact interval
/// images over one common period window, extending by translation
/// equivariance; both routes are computed and must agree.
inline CoveringCheck check_covering(const BlockSet& A, const BlockSet& B, const MapDescriptor& f,
                                    std::size_t cap = 100000) {
  if (!A.same_frame(B)) throw DomainError("ping-pong: mismatched frames");
  CoveringCheck out;
  if (selector_is_all(A.selector)) {  // A^c empty: vacuous
    out.pass = out.complement_image_in_B = out.Bc_in_image_of_A = true;
    out.method = "vacuous";
    return out;
  }
  const Frame& frame = A.frame;
  if (frame.kind() != Frame::IndexKind::integers)
    throw UnsupportedError("covering check needs a coterminal frame");
  auto step = frame.uniform_step();
  if (!step) throw UnsupportedError("covering check needs a uniform frame");
  const auto* selA = std::get_if<ResidueSel>(&A.selector);
  const auto* selB = std::get_if<ResidueSel>(&B.selector);

  auto classified = detail::classify_for_certification(f, *step);
  Rational w_lo, w_hi;  // block-aligned verification window [w_lo, w_hi)
  if (const auto* per = std::get_if<detail::PeriodicClass>(&classified)) {
    if (!selA || !selB || !selA->excluded.empty() || !selB->excluded.empty())
      throw UnsupportedError("periodic covering check needs pure residue selectors");
    Rational L = rational_lcm(per->period,
                              rational_lcm(*step * Rational(selA->modulus),
                                           *step * Rational(selB->modulus)));
    out.method = "periodic-window";
    out.window_length = L;
    w_lo = frame.point(0);
    w_hi = w_lo + L;
  } else if (const auto* fin = std::get_if<detail::FiniteClass>(&classified)) {
    // block-aligned window swallowing the support bound; identity outside
    std::int64_t i1 = *frame.locate(*fin->bound.lo) - 1;
    std::int64_t i2 = *frame.locate(*fin->bound.hi) + 2;
    // widen over finite selector exceptions so "far" is purely periodic
    auto widen = [&](const Selector& s) {
      if (const auto* r = std::get_if<ResidueSel>(&s)) {
        for (auto e : r->excluded) i1 = std::min(i1, e - 1), i2 = std::max(i2, e + 2);
      } else if (const auto* fi = std::get_if<FiniteSel>(&s)) {
        for (auto e : fi->indices) i1 = std::min(i1, e - 1), i2 = std::max(i2, e + 2);
      } else if (const auto* c = std::get_if<CofiniteSel>(&s)) {
        for (auto e : c->excluded) i1 = std::min(i1, e - 1), i2 = std::max(i2, e + 2);
      } else {
        throw UnsupportedError("covering check over AD-set selectors");
      }
    };
    widen(A.selector);
    widen(B.selector);
    out.method = "finite-window";
    w_lo = frame.point(i1);
    w_hi = frame.point(i2);
    out.window_length = w_hi - w_lo;

    // Outside the window f is the identity and both selectors are purely
    // periodic (all exceptions were widened into the window), so the far
    // condition reduces to A u B covering every block: probe one clean
    // residue period on each side.
    auto mod_of = [](const Selector& s) -> std::int64_t {
      if (const auto* r = std::get_if<ResidueSel>(&s)) return r->modulus;
      return 1;
    };
    const std::int64_t L = std::lcm(mod_of(A.selector), mod_of(B.selector));
    auto covered = [&](std::int64_t i) {
      return selector_contains(A.selector, i) || selector_contains(B.selector, i);
    };
    std::optional<std::int64_t> far;
    for (std::int64_t i = i2; i < i2 + L && !far; ++i)
      if (!covered(i)) far = i;
    for (std::int64_t i = i1 - L; i < i1 && !far; ++i)
      if (!covered(i)) far = i;
    if (far) {
      Rational x = frame.point(*far);  // f fixes x, x is in A^c and outside B
      out.pass = out.complement_image_in_B = out.Bc_in_image_of_A = false;
      out.counterexample = x;
      return out;
    }
  } else {
    throw UnsupportedError("covering check supports periodic or finite maps only");
  }

  const Interval window = Interval::left_closed(w_lo, w_hi);
  const Interval image_window = Interval::closed(f.eval(w_lo), f.eval(w_hi));
  const Rational count = (w_hi - w_lo) / *step;
  if (count > Rational(static_cast<std::int64_t>(cap)))
    throw UnsupportedError("covering window too large");

  const BlockSet Ac = A.complement();
  const BlockSet Bc = B.complement();
  auto image_set = [&](const BlockSet& bs) {
    IntervalSet out_set;
    for (const auto& blk : bs.blocks_in_window(window, cap)) out_set.insert(f.image(blk));
    return out_set;
  };
  IntervalSet f_of_Ac = image_set(Ac);
  IntervalSet f_of_A = image_set(A);
  IntervalSet B_set(B.blocks_in_window(image_window, cap));
  IntervalSet Bc_set(Bc.blocks_in_window(image_window, cap));
  // clip the complement sets to the exact image window
  Interval img_clip = Interval::left_closed(f.eval(w_lo), f.eval(w_hi));
  Bc_set = Bc_set.intersect_with(img_clip);
  B_set = B_set.intersect_with(img_clip);

  IntervalSet leftover2 = f_of_Ac.minus(B_set);          // f(A^c) \ B
  IntervalSet leftover1 = Bc_set.minus(f_of_A);          // B^c \ f(A)
  out.complement_image_in_B = leftover2.empty();
  out.Bc_in_image_of_A = leftover1.empty();
  if (out.complement_image_in_B != out.Bc_in_image_of_A)
    throw DomainError("covering check: the two equivalent routes disagree");
  out.pass = out.complement_image_in_B;
  if (!out.pass) {
    const IntervalSet& bad = leftover2.empty() ? leftover1 : leftover2;
    Rational y = bad.parts().front().representative();
    // verify the counterexample exactly before reporting it
    if (!leftover2.empty()) {
      if (B.contains_point(y) || A.contains_point(f.eval_inverse(y)))
        throw DomainError("covering check: counterexample failed verification");
    }
    out.counterexample = y;
  }
  return out;
}

/// Runs disjointness, per-pair covering, and the informational base-point
/// probe; certified only when disjointness and every covering pass.
inline PingPongCertificate certify(const PingPongTable& t) {
  if (t.pairs.empty()) throw DomainError("ping-pong: empty table");
  for (const auto& p : t.pairs) {
    if (!(p.A.frame == t.frame()) || !(p.B.frame == t.frame()))
      throw DomainError("ping-pong: mismatched frames");
    if (!t.action.bound(p.gen)) throw DomainError("ping-pong: unbound generator " + p.gen.str());
  }
  PingPongCertificate cert;
  cert.disjoint = check_disjoint(t);
  bool all_cover = true;
  for (const auto& p : t.pairs) {
    cert.coverings.push_back(check_covering(p.A, p.B, t.action.at(p.gen)));
    all_cover = all_cover && cert.coverings.back().pass;
  }
  std::vector<const Selector*> sels;
  for (const auto& p : t.pairs) {
    sels.push_back(&p.A.selector);
    sels.push_back(&p.B.selector);
  }
  if (auto idx = detail::uncovered_index(sels, t.frame().kind())) {
    cert.base_point.found = true;
    cert.base_point.point = t.frame().point(*idx);
    cert.base_point.note = "block outside every table set";
  } else {
    Interval hull = t.frame().hull();
    if (hull.lo) {
      cert.base_point.found = true;
      cert.base_point.point = *hull.lo - 1;
      cert.base_point.note = "point below the frame hull";
    } else if (hull.hi) {
      cert.base_point.found = true;
      cert.base_point.point = *hull.hi + 1;
      cert.base_point.note = "point above the frame hull";
    } else {
      cert.base_point.found = false;
      cert.base_point.note =
          "table sets cover the line; recorded informationally, verdict unaffected";
    }
  }
  cert.certified = cert.disjoint.pass && all_cover;
  return cert;
}

}  // namespace ordfree
