#include <catch2/catch_amalgamated.hpp>

#include "ordfree/basis.hpp"
#include "ordfree/example.hpp"
#include "ordfree/patch.hpp"
#include "ordfree/probe.hpp"
#include "ordfree/session.hpp"

using namespace ordfree;

namespace {

// Hand oracle for the worked example on [0,4]: block images [0,13/4),
// [13/4,14/4), [14/4,15/4), [15/4,4) with affine interpolation inside.
Rational example_f_oracle(const Rational& x) {
  Integer cell = rfloor(x / 4);
  Rational base = Rational(cell) * 4;
  Rational t = x - base;
  Rational y;
  if (t < 1)
    y = Rational(13, 4) * t;
  else if (t < 2)
    y = Rational(13, 4) + (t - 1) / 4;
  else if (t < 3)
    y = Rational(14, 4) + (t - 2) / 4;
  else
    y = Rational(15, 4) + (t - 3) / 4;
  return base + y;
}

}  // namespace

TEST_CASE("piecewise maps evaluate and invert exactly") {
  MapDescriptor f = example_f();
  CHECK(f.eval(Rational(1)) == Rational(13, 4));
  CHECK(f.eval(Rational(2)) == Rational(7, 2));
  CHECK(f.eval(Rational(3)) == Rational(15, 4));
  CHECK(f.eval(Rational(4)) == Rational(4));
  // interior interpolation: slope 13/4 on the first block
  CHECK(f.eval(Rational(1, 2)) == Rational(13, 8));
  CHECK(f.eval_inverse(Rational(13, 4)) == Rational(1));
  CHECK(f.eval_inverse(Rational(13, 8)) == Rational(1, 2));
  CHECK(MapDescriptor::identity().eval(Rational(7, 3)) == Rational(7, 3));
  CHECK(MapDescriptor::identity().eval_inverse(Rational(0)) == Rational(0));
}

TEST_CASE("the shifted copy satisfies g(x) = f(x-2)+2") {
  MapDescriptor f = example_f(), g = example_g();
  CHECK(g.eval(Rational(5, 2)) == Rational(29, 8));
  Sampler rng(11);
  for (int k = 0; k < 50; ++k) {
    Rational x = rng.rational(30, 10);
    CHECK(g.eval(x) == f.eval(x - 2) + 2);
  }
}

TEST_CASE("evaluation matches the block-image oracle everywhere") {
  MapDescriptor f = example_f();
  Sampler rng(23);
  for (int k = 0; k < 300; ++k) {
    Rational x = rng.rational(60, 16);
    CAPTURE(to_string(x));
    CHECK(f.eval(x) == example_f_oracle(x));
  }
}

TEST_CASE("strict monotonicity across a descriptor corpus") {
  std::vector<MapDescriptor> corpus = {
      example_f(), example_g(), MapDescriptor::identity(),
      MapDescriptor::affine(Rational(3, 2), Rational(-1, 3)),
      rank2_basis(Frame::unit()).first,
      rank2_basis(Frame::geometric_in(Interval::open(Rational(0), Rational(1)))).second};
  Sampler rng(5);
  for (const auto& d : corpus) {
    for (int k = 0; k < 200; ++k) {
      Rational x = rng.rational(20, 12), y = rng.rational(20, 12);
      if (x == y) continue;
      if (y < x) std::swap(x, y);
      CHECK(d.eval(x) < d.eval(y));
    }
  }
}

TEST_CASE("bijectivity witness: inverse after forward is the identity") {
  std::vector<MapDescriptor> corpus = {
      example_f(), example_g(),
      rank2_basis(Frame::unit()).second,
      rank2_basis(Frame::geometric_in(Interval::open(Rational(-1), Rational(2)))).first};
  Sampler rng(17);
  for (const auto& d : corpus) {
    for (int k = 0; k < 250; ++k) {
      Rational x = rng.rational(40, 20);
      CHECK(d.eval_inverse(d.eval(x)) == x);
    }
  }
}

TEST_CASE("image of an interval is computed on endpoints with openness kept") {
  MapDescriptor f = example_f();
  CHECK(f.image(Interval::left_closed(Rational(0), Rational(1))) ==
        Interval::left_closed(Rational(0), Rational(13, 4)));
  CHECK(f.image(Interval::left_closed(Rational(3), Rational(4))) ==
        Interval::left_closed(Rational(15, 4), Rational(4)));
  CHECK(MapDescriptor::identity().image(Interval::left_closed(Rational(2), Rational(3))) ==
        Interval::left_closed(Rational(2), Rational(3)));
  // endpoint and interior samples land inside the image
  Interval j = Interval::open(Rational(1, 3), Rational(9, 4));
  Interval img = f.image(j);
  Sampler rng(3);
  for (int k = 0; k < 100; ++k) {
    Rational t = Rational(rng.integer_in(1, 99), 100);
    Rational x = *j.lo + t * (*j.hi - *j.lo);
    CHECK(img.contains(f.eval(x)));
  }
}

TEST_CASE("periodicity law on sampled points") {
  MapDescriptor f = example_f();
  Sampler rng(29);
  for (int k = 0; k < 100; ++k) {
    Rational x = rng.rational(50, 14);
    CHECK(f.eval(x + 4) == f.eval(x) + 4);
  }
}

TEST_CASE("piecewise patching assembles segment maps") {
  // segments [0,1] -> [0,3] and [1,4] -> [3,4] repeated with period 4
  std::vector<std::pair<Interval, MapDescriptor>> segments = {
      {Interval::closed(Rational(0), Rational(1)), MapDescriptor::affine(Rational(3), Rational(0))},
      {Interval::closed(Rational(1), Rational(4)),
       MapDescriptor::affine(Rational(1, 3), Rational(8, 3))}};
  MapDescriptor d = piecewise_patch_periodic(segments, Rational(4));
  // oracle: direct block formulas
  auto oracle = [](const Rational& x) {
    Integer cell = rfloor(x / 4);
    Rational base = Rational(cell) * 4;
    Rational t = x - base;
    return base + (t < 1 ? 3 * t : 3 + (t - 1) / 3);
  };
  Sampler rng(31);
  for (int k = 0; k < 200; ++k) {
    Rational x = rng.rational(40, 12);
    CHECK(d.eval(x) == oracle(x));
  }
  // agreement with each segment map on interior points of its segment
  CHECK(d.eval(Rational(1, 2)) == Rational(3, 2));
  CHECK(d.eval(Rational(2)) == segments[1].second.eval(Rational(2)));

  // single identity segment patches to the identity
  MapDescriptor id = piecewise_patch(
      {{Interval::closed(Rational(0), Rational(2)), MapDescriptor::identity()}},
      Interval::all());
  CHECK(id.is_identity_node());

  // mismatched endpoint images across the seam are rejected
  std::vector<std::pair<Interval, MapDescriptor>> bad = {
      {Interval::closed(Rational(0), Rational(1)), MapDescriptor::affine(Rational(2), Rational(0))},
      {Interval::closed(Rational(1), Rational(4)),
       MapDescriptor::affine(Rational(1, 3), Rational(8, 3))}};
  CHECK_THROWS_AS(piecewise_patch_periodic(bad, Rational(4)), DomainError);
}

TEST_CASE("bounded piecewise patching fixes outer endpoints") {
  std::vector<std::pair<Interval, MapDescriptor>> segments = {
      {Interval::closed(Rational(0), Rational(1)), MapDescriptor::affine(Rational(3), Rational(0))},
      {Interval::closed(Rational(1), Rational(4)),
       MapDescriptor::affine(Rational(1, 3), Rational(8, 3))}};
  MapDescriptor d = piecewise_patch(segments, Interval::all());
  CHECK(d.eval(Rational(1, 2)) == Rational(3, 2));
  CHECK(d.eval(Rational(5)) == Rational(5));   // identity outside the hull
  CHECK(d.eval(Rational(-1)) == Rational(-1));
  // stretching the hull without fixing its endpoints cannot totalize
  std::vector<std::pair<Interval, MapDescriptor>> bad = {
      {Interval::closed(Rational(0), Rational(1)),
       MapDescriptor::affine(Rational(2), Rational(0))}};
  CHECK_THROWS_AS(piecewise_patch(bad, Interval::all()), DomainError);
}

TEST_CASE("disjoint patching merges parts and keeps the identity elsewhere") {
  // parts acting on (0,1) and (2,3)
  MapDescriptor p1 = MapDescriptor::finite(
      PiecewiseLinear({Rational(0), Rational(1, 2), Rational(1)},
                      {Rational(0), Rational(3, 4), Rational(1)}));
  MapDescriptor p2 = MapDescriptor::finite(
      PiecewiseLinear({Rational(2), Rational(5, 2), Rational(3)},
                      {Rational(2), Rational(9, 4), Rational(3)}));
  MapDescriptor d = disjoint_patch({p1, p2});
  Sampler rng(41);
  for (int k = 0; k < 100; ++k) {
    Rational x = rng.rational(25, 9);
    Rational want = p1.support().contains(x) ? p1.eval(x)
                  : p2.support().contains(x) ? p2.eval(x)
                                             : x;
    CHECK(d.eval(x) == want);
  }
  CHECK(disjoint_patch({}).is_identity_node());
  CHECK_THROWS_AS(disjoint_patch({p1, p1}), DomainError);  // overlapping support
}

TEST_CASE("trivial extension acts inside its interval only") {
  Interval box = Interval::open(Rational(0), Rational(4));
  MapDescriptor f = example_f();
  MapDescriptor ext = restrict_to(
      MapDescriptor::finite(PiecewiseLinear(
          {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)},
          {Rational(0), Rational(13, 4), Rational(14, 4), Rational(15, 4), Rational(4)})),
      box);
  CHECK(ext.eval(Rational(1)) == Rational(13, 4));
  CHECK(ext.eval(Rational(5)) == Rational(5));
  CHECK(ext.eval(Rational(11, 2)) == Rational(11, 2));
  auto rep = support_probe(ext, Interval::closed(Rational(5), Rational(6)), 4);
  CHECK(rep.exact);
  CHECK(rep.moved_subintervals.empty());
  // a map that does not carry the interval onto itself is rejected
  CHECK_THROWS_AS(restrict_to(f, Interval::open(Rational(0), Rational(3))), DomainError);
  (void)f;
}

TEST_CASE("support probe solves the per-piece fixed point equations") {
  MapDescriptor f = example_f();
  auto rep = support_probe(f, Interval::closed(Rational(0), Rational(8)), 5);
  REQUIRE(rep.exact);
  REQUIRE(rep.fixed_points_found.size() == 3);
  CHECK(rep.fixed_points_found[0] == Rational(0));
  CHECK(rep.fixed_points_found[1] == Rational(4));
  CHECK(rep.fixed_points_found[2] == Rational(8));
  REQUIRE(rep.moved_subintervals.size() == 2);
  CHECK(rep.moved_subintervals[0] == Interval::open(Rational(0), Rational(4)));
  CHECK(rep.moved_subintervals[1] == Interval::open(Rational(4), Rational(8)));

  auto id_rep = support_probe(MapDescriptor::identity(),
                              Interval::closed(Rational(0), Rational(1)), 4);
  CHECK(id_rep.moved_subintervals.empty());
  CHECK(id_rep.fixed_points_found.empty());
}

TEST_CASE("finite equality canonicalizes redundant breakpoints") {
  PiecewiseLinear a({Rational(0), Rational(1), Rational(4)},
                    {Rational(0), Rational(3), Rational(4)});
  // same map with a redundant collinear breakpoint inserted mid-piece
  PiecewiseLinear b({Rational(0), Rational(1, 2), Rational(1), Rational(4)},
                    {Rational(0), Rational(3, 2), Rational(3), Rational(4)});
  CHECK(finite_pl_equal(a, b));
  // the example pattern differs from its shifted copy
  PiecewiseLinear f_pat(
      {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)},
      {Rational(0), Rational(13, 4), Rational(14, 4), Rational(15, 4), Rational(4)});
  PiecewiseLinear g_like(
      {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)},
      {Rational(0), Rational(5, 4), Rational(6, 4), Rational(7, 4), Rational(4)});
  CHECK_FALSE(finite_pl_equal(f_pat, g_like));
  // identity equals the empty piece list
  PiecewiseLinear id1;
  PiecewiseLinear id2({Rational(0), Rational(1)}, {Rational(0), Rational(1)});
  CHECK(finite_pl_equal(id1, id2));
}

TEST_CASE("composed descriptors evaluate as words") {
  MapDescriptor f = example_f(), g = example_g();
  MapDescriptor w = MapDescriptor::composed({{f, -2}, {g, 1}, {f, 2}});
  Sampler rng(53);
  for (int k = 0; k < 60; ++k) {
    Rational x = rng.rational(20, 8);
    Rational by_hand = f.eval(f.eval(x));
    by_hand = g.eval(by_hand);
    by_hand = f.eval_inverse(f.eval_inverse(by_hand));
    CHECK(w.eval(x) == by_hand);
    CHECK(w.eval_inverse(w.eval(x)) == x);
  }
}

TEST_CASE("exact pieces of composed maps match pointwise evaluation") {
  MapDescriptor f = example_f(), g = example_g();
  MapDescriptor w = MapDescriptor::composed({{f, 1}, {g, 1}, {f, -1}, {g, -1}});
  Interval window = Interval::closed(Rational(-2), Rational(6));
  std::vector<AffinePiece> pieces;
  REQUIRE(w.pieces_in(window, pieces, 4096));
  Sampler rng(59);
  for (int k = 0; k < 200; ++k) {
    Rational x = Rational(rng.integer_in(-16, 48), 8);
    Rational want = w.eval(x);
    bool covered = false;
    for (const auto& p : pieces) {
      if (p.dom.contains(x)) {
        CHECK(p.eval(x) == want);
        covered = true;
      }
    }
    CHECK(covered);
  }
}

TEST_CASE("lazy rule failures surface as errors") {
  struct BadRule final : BlockRule {
    const char* rule_name() const override { return "bad"; }
    MapDescriptor at(std::int64_t block) const override {
      if (block < 0) throw DomainError("rule undefined below zero");
      return MapDescriptor::identity();
    }
  };
  MapDescriptor d = MapDescriptor::lazy(Frame::unit(), std::make_shared<BadRule>());
  CHECK(d.eval(Rational(3, 2)) == Rational(3, 2));
  CHECK_THROWS_AS(d.eval(Rational(-3, 2)), DomainError);
}
