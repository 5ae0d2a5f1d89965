#include <catch2/catch_amalgamated.hpp>

#include "ordfree/basis.hpp"
#include "ordfree/example.hpp"
#include "ordfree/probe.hpp"
#include "ordfree/session.hpp"
#include "ordfree/witness.hpp"

using namespace ordfree;

namespace {

const GeneratorId kF("f");
const GeneratorId kG("g");

// Brute-force reducer used as the oracle for reduce(): repeatedly delete the
// first adjacent inverse pair until none is left.
Word reduce_oracle(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    const auto& ls = w.letters();
    for (std::size_t k = 0; k + 1 < ls.size(); ++k) {
      if (ls[k].inverse_of(ls[k + 1])) {
        std::vector<Letter> next(ls.begin(), ls.end());
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(k),
                   next.begin() + static_cast<std::ptrdiff_t>(k + 2));
        w = Word(std::move(next));
        changed = true;
        break;
      }
    }
  }
  return w;
}

}  // namespace

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  CHECK(reduce(parse_word("f f^-1")).empty());
  CHECK(reduce(parse_word("f g g^-1 f")) == parse_word("f f"));
  CHECK(reduce(parse_word("f g f^-1")) == parse_word("f g f^-1"));
  CHECK(reduce(parse_word("")).empty());
}

TEST_CASE("reduce is confluent and matches the brute-force oracle") {
  Sampler rng(101);
  std::vector<GeneratorId> alphabet{kF, kG};
  for (int k = 0; k < 300; ++k) {
    // build an unreduced word by splicing w u u^-1 v together
    Word w = rng.reduced_word_up_to(alphabet, 6);
    Word u = rng.reduced_word_up_to(alphabet, 4);
    Word v = rng.reduced_word_up_to(alphabet, 6);
    Word spliced = w.concat(u).concat(u.inverse()).concat(v);
    Word r = reduce(spliced);
    CHECK(r.reduced());
    CHECK(reduce(r) == r);
    CHECK(r == reduce_oracle(spliced));
    CHECK(reduce(u.concat(u.inverse()).concat(v)) == reduce(v));
  }
}

TEST_CASE("word text format round-trips") {
  for (const char* s : {"f g^-1 f", "f#3 g#01(0)^-1", "g"}) {
    CHECK(parse_word(s).str() == s);
  }
  CHECK_THROWS_AS(parse_word("f^2"), ParseError);
  CHECK_THROWS_AS(parse_word("#1"), ParseError);
}

TEST_CASE("word evaluation applies letters right to left") {
  Action a = example_action();
  CHECK(eval_word(a, parse_word("f"), Rational(2)) == Rational(7, 2));
  CHECK(eval_word(a, Word(), Rational(9, 7)) == Rational(9, 7));
  CHECK(eval_word(a, parse_word("f f^-1"), Rational(9, 7)) == Rational(9, 7));
  // unbound letters are rejected
  CHECK_THROWS_AS(eval_word(a, parse_word("h"), Rational(0)), DomainError);
}

TEST_CASE("group laws hold under evaluation") {
  Action a = example_action();
  Sampler rng(997);
  std::vector<GeneratorId> alphabet{kF, kG};
  for (int k = 0; k < 200; ++k) {
    Word u = rng.reduced_word_up_to(alphabet, 6);
    Word v = rng.reduced_word_up_to(alphabet, 6);
    Rational x = rng.rational(24, 10);
    CHECK(eval_word(a, u.concat(v), x) == eval_word(a, u, eval_word(a, v, x)));
    CHECK(eval_word(a, u.concat(u.inverse()), x) == x);
  }
}

TEST_CASE("conjugate basis words unfold by definition") {
  CHECK(rank_omega_word(0, kF, kG) == parse_word("g"));
  CHECK(rank_omega_word(2, kF, kG) == parse_word("f^-1 f^-1 g f f"));
  // distinct conjugates never cancel to the empty word
  Word w = rank_omega_word(1, kF, kG).concat(rank_omega_word(2, kF, kG).inverse());
  CHECK_FALSE(reduce(w).empty());
}

TEST_CASE("rank-2 pair over the unit frame matches the segment bookkeeping") {
  auto [f, g] = rank2_basis(Frame::unit());
  // stretch segments [4k, 4k+1] -> [4k, 4k+3], squash [4k+1, 4k+4] -> [4k+3, 4k+4]
  CHECK(f.eval(Rational(0)) == Rational(0));
  CHECK(f.eval(Rational(1)) == Rational(3));
  CHECK(f.eval(Rational(4)) == Rational(4));
  CHECK(f.eval(Rational(5)) == Rational(7));
  CHECK(f.eval(Rational(-4)) == Rational(-4));
  CHECK(f.eval(Rational(-3)) == Rational(-1));
  CHECK(g.eval(Rational(2)) == Rational(2));
  CHECK(g.eval(Rational(3)) == Rational(5));
  CHECK(g.eval(Rational(6)) == Rational(6));
  // g is f two blocks over
  Sampler rng(7);
  for (int k = 0; k < 100; ++k) {
    Rational x = rng.rational(30, 8);
    CHECK(g.eval(x) == f.eval(x - 2) + 2);
  }
}

TEST_CASE("rank-2 pair inside a bounded interval is the identity outside") {
  Interval box = Interval::open(Rational(0), Rational(1));
  auto [f, g] = rank2_basis(Frame::geometric_in(box));
  auto probe_f = support_probe(f, Interval::closed(Rational(2), Rational(3)), 4);
  CHECK(probe_f.moved_subintervals.empty());
  auto probe_g = support_probe(g, Interval::closed(Rational(-2), Rational(-1)), 4);
  CHECK(probe_g.moved_subintervals.empty());
  CHECK(f.eval(Rational(0)) == Rational(0));
  CHECK(f.eval(Rational(1)) == Rational(1));
  // moved inside
  Frame fr = Frame::geometric_in(box);
  Rational inside = fr.point(1);
  CHECK(f.eval(inside) != inside);
  // naturals frames are not coterminal
  CHECK_THROWS_AS(rank2_basis(Frame::unit_naturals()), DomainError);
}

TEST_CASE("the canonical table of a rank-2 pair certifies") {
  Frame frame = Frame::unit();
  auto [f, g] = rank2_basis(frame);
  PingPongTable t;
  t.action.alphabet[kF] = f;
  t.action.alphabet[kG] = g;
  t.pairs.push_back(PingPongPair{BlockSet(frame, select_residue(4, {0})),
                                 BlockSet(frame, select_residue(4, {3})), kF});
  t.pairs.push_back(PingPongPair{BlockSet(frame, select_residue(4, {2})),
                                 BlockSet(frame, select_residue(4, {1})), kG});
  PingPongCertificate cert = certify(t);
  CHECK(cert.certified);

  // every nonempty reduced word over the pair has a verified moved point
  Sampler rng(2024);
  std::vector<GeneratorId> alphabet{kF, kG};
  for (int k = 0; k < 100; ++k) {
    Word w = rng.reduced_word_up_to(alphabet, 16);
    WitnessResult r = nontriviality_witness(t.action, w);
    REQUIRE(r.found);
    CHECK(eval_word(t.action, w, r.point) == r.image);
    CHECK(r.image != r.point);
  }
}

TEST_CASE("witness search rejects the empty word and verifies hits") {
  Action a = example_action();
  CHECK_THROWS_AS(nontriviality_witness(a, Word()), DomainError);
  CHECK_THROWS_AS(nontriviality_witness(a, parse_word("f f^-1")), DomainError);
  WitnessResult r = nontriviality_witness(a, parse_word("f"));
  REQUIRE(r.found);
  CHECK(a.at(kF).eval(r.point) != r.point);
  // the commutator of the certified pair moves a point
  WitnessResult c = nontriviality_witness(a, parse_word("f g f^-1 g^-1"));
  REQUIRE(c.found);
  CHECK(eval_word(a, parse_word("f g f^-1 g^-1"), c.point) == c.image);
}

TEST_CASE("exhaustion is reported as inconclusive, never as triviality") {
  // an action where the tested word happens to act as the identity: the
  // search must exhaust its budget and say so
  Action a;
  a.alphabet[kF] = MapDescriptor::identity();
  WitnessBudget tiny;
  tiny.max_windows = 2;
  tiny.max_candidates = 50;
  WitnessResult r = nontriviality_witness(a, parse_word("f"), tiny);
  CHECK_FALSE(r.found);
  CHECK(r.candidates_tried <= 50);
}
