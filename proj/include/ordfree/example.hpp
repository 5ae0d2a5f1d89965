#pragma once

#include "ordfree/pingpong.hpp"

namespace ordfree {

// A worked free pair on the unit frame, shipped for demos and tests:
// f is periodic with period 4 and carries the four unit blocks of each cell to
// [a, a+13/4), [a+9/4, a+10/4), [a+6/4, a+7/4), [a+3/4, a+1); g is f shifted
// by two. {f, g} generates a free group, certified by the table below.

inline MapDescriptor example_f() {
  PiecewiseLinear pattern(
      {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)},
      {Rational(0), Rational(13, 4), Rational(14, 4), Rational(15, 4), Rational(4)});
  return MapDescriptor::periodic(Rational(4), pattern);
}

inline MapDescriptor example_g() {
  return MapDescriptor::conjugate_by_shift(example_f(), Rational(2));
}

inline Action example_action() {
  Action a;
  a.alphabet[GeneratorId("f")] = example_f();
  a.alphabet[GeneratorId("g")] = example_g();
  return a;
}

/// The table A_1 = blocks 0 mod 4, B_1 = blocks 3 mod 4 for f, and
/// A_2 = blocks 2 mod 4, B_2 = blocks 1 mod 4 for g.
inline PingPongTable example_table() {
  Frame frame = Frame::unit();
  PingPongTable t;
  t.action = example_action();
  t.pairs.push_back(PingPongPair{BlockSet(frame, select_residue(4, {0})),
                                 BlockSet(frame, select_residue(4, {3})), GeneratorId("f")});
  t.pairs.push_back(PingPongPair{BlockSet(frame, select_residue(4, {2})),
                                 BlockSet(frame, select_residue(4, {1})), GeneratorId("g")});
  return t;
}

/// The same table with f's first-block image flattened to [a, a+2): the
/// covering condition fails and certification must refute it.
inline PingPongTable mutated_table() {
  PiecewiseLinear pattern(
      {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)},
      {Rational(0), Rational(2), Rational(5, 2), Rational(3), Rational(4)});
  MapDescriptor f = MapDescriptor::periodic(Rational(4), pattern);
  PingPongTable t = example_table();
  t.action.alphabet[GeneratorId("f")] = f;
  return t;
}

}  // namespace ordfree
