#include <catch2/catch_amalgamated.hpp>

#include "ordfree/blockset.hpp"
#include "ordfree/interval_set.hpp"
#include "ordfree/session.hpp"

using namespace ordfree;

TEST_CASE("rational text format round-trips canonical strings") {
  for (const char* s : {"13/4", "-1/3", "0/1", "7/2", "-100000000000000000001/3"}) {
    CHECK(to_string(parse_rational(s)) == s);
  }
  CHECK(to_string(parse_rational("26/8")) == "13/4");  // normalized on parse
  CHECK(to_string(parse_rational("5")) == "5/1");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("a/b"), ParseError);
}

TEST_CASE("rational comparison is exact cross-multiplication") {
  CHECK(rational_cmp(parse_rational("13/4"), parse_rational("7/2")) == std::strong_ordering::less);
  CHECK(rational_cmp(parse_rational("0/1"), parse_rational("0/1")) ==
        std::strong_ordering::equal);
  CHECK(rational_cmp(parse_rational("-1/3"), parse_rational("-1/2")) ==
        std::strong_ordering::greater);
}

TEST_CASE("floor and ceil") {
  CHECK(rfloor(Rational(5, 2)) == 2);
  CHECK(rfloor(Rational(-5, 2)) == -3);
  CHECK(rfloor(Rational(4)) == 4);
  CHECK(rceil(Rational(5, 2)) == 3);
  CHECK(rceil(Rational(-5, 2)) == -2);
}

TEST_CASE("rational lcm") {
  CHECK(rational_lcm(Rational(4), Rational(6)) == Rational(12));
  CHECK(rational_lcm(Rational(1, 2), Rational(1, 3)) == Rational(1));
  CHECK(rational_lcm(Rational(3, 2), Rational(2)) == Rational(6));
}

TEST_CASE("interval parsing and membership") {
  Interval v = parse_interval("[0/1, 1/1)");
  CHECK(v.contains(Rational(0)));
  CHECK(v.contains(Rational(1, 2)));
  CHECK_FALSE(v.contains(Rational(1)));
  CHECK(to_string(v) == "[0/1,1/1)");
  Interval all = parse_interval("(-inf,inf)");
  CHECK(all.contains(Rational(-1000000)));
  CHECK(to_string(all) == "(-inf,inf)");
  CHECK_THROWS_AS(parse_interval("[1,0]"), DomainError);
  CHECK_THROWS_AS(parse_interval("[-inf,0]"), ParseError);
  CHECK(parse_interval("[2/1,2/1]").is_point());
}

TEST_CASE("interval set algebra is exact") {
  IntervalSet s;
  s.insert(Interval::left_closed(Rational(0), Rational(1)));
  s.insert(Interval::left_closed(Rational(1), Rational(2)));
  REQUIRE(s.parts().size() == 1);  // touching half-open blocks merge
  CHECK(s.parts()[0] == Interval::left_closed(Rational(0), Rational(2)));

  IntervalSet t;
  t.insert(Interval::open(Rational(0), Rational(1)));
  t.insert(Interval::open(Rational(1), Rational(2)));
  REQUIRE(t.parts().size() == 2);  // open ends leave the shared point out

  IntervalSet u({Interval::closed(Rational(0), Rational(4))});
  IntervalSet cut({Interval::open(Rational(1), Rational(3))});
  auto rest = u.minus(cut);
  REQUIRE(rest.parts().size() == 2);
  CHECK(rest.parts()[0] == Interval::closed(Rational(0), Rational(1)));
  CHECK(rest.parts()[1] == Interval::closed(Rational(3), Rational(4)));
  CHECK(u.contains(cut));
  CHECK_FALSE(cut.contains(u));

  // degenerate leftover single point
  IntervalSet w({Interval::closed(Rational(0), Rational(1))});
  auto leftover = w.minus(IntervalSet({Interval::left_closed(Rational(0), Rational(1))}));
  REQUIRE(leftover.parts().size() == 1);
  CHECK(leftover.parts()[0].is_point());
}

TEST_CASE("unit frame locates by floor") {
  Frame f = Frame::unit();
  CHECK(f.point(3) == Rational(3));
  CHECK(f.point(-5) == Rational(-5));
  CHECK(*f.locate(Rational(5, 2)) == 2);
  CHECK(*f.locate(Rational(3)) == 3);  // left-closed blocks
  CHECK(*f.locate(Rational(-1, 2)) == -1);
  CHECK(f.hull() == Interval::all());
  CHECK(*f.uniform_step() == Rational(1));
}

TEST_CASE("naturals frame rejects points below its first point") {
  Frame f = Frame::unit_naturals();
  CHECK_FALSE(f.locate(Rational(-1)).has_value());
  CHECK(*f.locate(Rational(0)) == 0);
  CHECK(f.hull().contains(Rational(0)));
  CHECK_FALSE(f.hull().contains(Rational(-1, 7)));
  CHECK_THROWS_AS(f.point(-1), DomainError);
}

TEST_CASE("geometric frame is coterminal in a bounded interval") {
  Interval box = Interval::open(Rational(0), Rational(1));
  Frame f = Frame::geometric_in(box);
  CHECK(f.hull() == box);
  // strictly increasing across a swath of indices, all inside the box
  for (std::int64_t i = -12; i < 12; ++i) {
    CHECK(f.point(i) < f.point(i + 1));
    CHECK(box.contains(f.point(i)));
  }
  // locate agrees with point on every stored and tail index
  for (std::int64_t i = -12; i <= 12; ++i) CHECK(*f.locate(f.point(i)) == i);
  CHECK_FALSE(f.locate(Rational(1)).has_value());
  CHECK_FALSE(f.locate(Rational(0)).has_value());
  CHECK_FALSE(f.locate(Rational(2)).has_value());
  CHECK_FALSE(f.uniform_step().has_value());
}

TEST_CASE("frame locate inverts point on every frame kind") {
  std::vector<Frame> frames = {Frame::unit(), Frame::unit_naturals(),
                               Frame::arithmetic(Rational(1, 3), Rational(5, 7)),
                               Frame::geometric_in(Interval::open(Rational(-2), Rational(7))),
                               Frame::geometric_naturals_in(Interval::open(Rational(0), Rational(1)))};
  for (const auto& f : frames) {
    const std::int64_t lo = f.kind() == Frame::IndexKind::naturals ? 0 : -20;
    for (std::int64_t i = lo; i <= 20; ++i) {
      CAPTURE(i);
      CHECK(*f.locate(f.point(i)) == i);
      // interior points land in the same block
      Rational mid = (f.point(i) + f.point(i + 1)) / 2;
      CHECK(*f.locate(mid) == i);
    }
  }
}

TEST_CASE("frame canonicalization makes equal point sequences equal") {
  Frame a = Frame::unit();
  Frame b(Frame::IndexKind::integers, -2,
          {Rational(-2), Rational(-1), Rational(0), Rational(1)}, Frame::ArithTail{1},
          Frame::ArithTail{1});
  CHECK(a == b);
  Frame c = Frame::arithmetic(Rational(0), Rational(2));
  CHECK_FALSE(a == c);
}

TEST_CASE("frame subsample keeps the point function") {
  Frame f = Frame::geometric_in(Interval::open(Rational(0), Rational(1)));
  Frame coarse = f.subsample(4, 2);
  for (std::int64_t j = -6; j <= 6; ++j) CHECK(coarse.point(j) == f.point(2 + 4 * j));
  Frame unit4 = Frame::unit().subsample(4, 0);
  CHECK(*unit4.uniform_step() == Rational(4));
}

TEST_CASE("frame shift translates every point") {
  Frame f = Frame::geometric_in(Interval::open(Rational(0), Rational(1)));
  Frame g = f.shifted(Rational(5, 3));
  for (std::int64_t i = -6; i <= 6; ++i) CHECK(g.point(i) == f.point(i) + Rational(5, 3));
}

TEST_CASE("degenerate frames are rejected") {
  CHECK_THROWS_AS(Frame(Frame::IndexKind::integers, 0, {}, Frame::ArithTail{1},
                        Frame::ArithTail{1}),
                  DomainError);
  CHECK_THROWS_AS(Frame(Frame::IndexKind::integers, 0, {Rational(0)}, Frame::ArithTail{0},
                        Frame::ArithTail{1}),
                  DomainError);
  CHECK_THROWS_AS(Frame::geometric_in(Interval::point(Rational(1))), DomainError);
}

TEST_CASE("blockset membership on the unit frame") {
  Frame f = Frame::unit();
  BlockSet n0(f, select_residue(4, {0}));
  CHECK(n0.contains_point(Rational(0)));
  CHECK(n0.contains_point(Rational(1, 2)));
  CHECK(n0.contains_point(Rational(4)));
  CHECK(n0.contains_point(Rational(-4)));
  CHECK_FALSE(n0.contains_point(Rational(1)));
  CHECK_FALSE(n0.contains_point(Rational(-1)));
}

TEST_CASE("residue blocksets decide disjointness by residue arithmetic") {
  Frame f = Frame::unit();
  BlockSet n0(f, select_residue(4, {0}));
  BlockSet n3(f, select_residue(4, {3}));
  CHECK(blocksets_disjoint(n0, n3));
  CHECK_FALSE(blocksets_disjoint(n0, n0));
  CHECK(blocksets_disjoint(BlockSet(f, select_residue(2, {0})),
                           BlockSet(f, select_residue(2, {1}))));
  // mismatched frames are an error
  BlockSet other(Frame::arithmetic(Rational(0), Rational(2)), select_residue(4, {0}));
  CHECK_THROWS_AS(common_block(n0, other), DomainError);
}

TEST_CASE("complement of a residue blockset") {
  Frame f = Frame::unit();
  BlockSet n3(f, select_residue(4, {3}));
  BlockSet c = n3.complement();
  const auto& sel = std::get<ResidueSel>(c.selector);
  CHECK(sel.residues == std::vector<std::int64_t>{0, 1, 2});
  CHECK(blocksets_disjoint(n3, c));
  // membership is a partition of the hull
  Sampler rng(7);
  for (int k = 0; k < 200; ++k) {
    Rational x = rng.rational(40, 12);
    CHECK(n3.contains_point(x) != c.contains_point(x));
  }
}

TEST_CASE("finite and cofinite selectors") {
  Frame f = Frame::unit();
  BlockSet fin(f, FiniteSel{{1, 5, 9}});
  BlockSet cof = fin.complement();
  CHECK(std::holds_alternative<CofiniteSel>(cof.selector));
  CHECK(blocksets_disjoint(fin, cof));
  CHECK(cof.complement() == fin);
  CHECK(fin.contains_point(Rational(11, 2)));
  CHECK_FALSE(cof.contains_point(Rational(11, 2)));
  // two cofinite sets always share an index
  CHECK_FALSE(blocksets_disjoint(cof, BlockSet(f, CofiniteSel{{2}})));
}

TEST_CASE("branch selectors intersect by common prefix") {
  Frame f = Frame::unit_naturals();
  BlockSet a(f, BranchSel{Branch::parse("(0)")});
  BlockSet b(f, BranchSel{Branch::parse("(1)")});
  BlockSet c(f, BranchSel{Branch::parse("0(1)")});
  CHECK(blocksets_disjoint(a, b));   // no common prefix
  CHECK_FALSE(blocksets_disjoint(a, c));  // share the prefix "0"
  BlockSet res(f, select_residue(2, {0}));
  CHECK_THROWS_AS(common_block(a, res), UnsupportedError);
}

TEST_CASE("blocks_meet_interval is exact on boundaries") {
  Frame f = Frame::unit();
  BlockSet evens(f, select_residue(2, {0}));
  CHECK(blocks_meet_interval(evens, Interval::open(Rational(0), Rational(1))));
  CHECK_FALSE(blocks_meet_interval(evens, Interval::open(Rational(1), Rational(2))));
  CHECK(blocks_meet_interval(evens, Interval::closed(Rational(2), Rational(2))));
  // block [0,1) does not contain its right endpoint
  CHECK_FALSE(blocks_meet_interval(evens, Interval::closed(Rational(1), Rational(3, 2))));
  CHECK(blocks_meet_interval(evens, Interval::ray_above(Rational(100), false)));
  CHECK(blocks_meet_interval(evens, Interval::ray_below(Rational(-100), false)));
  BlockSet fin(f, FiniteSel{{4}});
  CHECK_FALSE(blocks_meet_interval(fin, Interval::ray_above(Rational(5), true)));
  CHECK(blocks_meet_interval(fin, Interval::open(Rational(9, 2), Rational(11, 2))));
}

TEST_CASE("blocks_in_window clips selected blocks") {
  Frame f = Frame::unit();
  BlockSet evens(f, select_residue(2, {0}));
  auto blocks = evens.blocks_in_window(Interval::closed(Rational(-2), Rational(3)), 100);
  REQUIRE(blocks.size() == 3);  // [-2,-1), [0,1), and [2,3) clipped by the window
  CHECK(blocks[0] == Interval::left_closed(Rational(-2), Rational(-1)));
  CHECK(blocks[1] == Interval::left_closed(Rational(0), Rational(1)));
  CHECK(blocks[2] == Interval::left_closed(Rational(2), Rational(3)));
}
