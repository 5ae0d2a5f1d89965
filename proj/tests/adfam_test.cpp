#include <catch2/catch_amalgamated.hpp>

#include "ordfree/adfam.hpp"

using namespace ordfree;

namespace {

// Independent oracle for the prefix code: e(s) = 2^|s| + value(s) computed
// directly from a bit string.
std::uint64_t encode_oracle(const std::string& bits) {
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return (std::uint64_t{1} << bits.size()) + v;
}

}  // namespace

TEST_CASE("branch text format round-trips") {
  for (const char* s : {"(0)", "(1)", "0101(0)", "(01)", "0010(110)"}) {
    CHECK(Branch::parse(s).str() == s);
  }
  CHECK_THROWS_AS(Branch::parse("01"), ParseError);
  CHECK_THROWS_AS(Branch::parse("01()"), ParseError);
  CHECK_THROWS_AS(Branch::parse("0a(1)"), ParseError);
}

TEST_CASE("branches are equal exactly when their bit sequences agree") {
  CHECK(Branch::parse("0(0)") == Branch::parse("(0)"));
  CHECK(Branch::parse("01(01)") == Branch::parse("(01)"));
  CHECK(Branch::parse("(0101)") == Branch::parse("(01)"));
  CHECK(Branch::parse("1001(01)") == Branch::parse("10(01)"));
  CHECK_FALSE(Branch::parse("(01)") == Branch::parse("(10)"));
  CHECK_FALSE(Branch::parse("0(1)") == Branch::parse("(1)"));
}

TEST_CASE("branch bits follow seed then period") {
  Branch b = Branch::parse("01(10)");
  std::string want = "0110101010";
  for (std::size_t n = 0; n < want.size(); ++n) CHECK(b.bit(n) == (want[n] == '1'));
}

TEST_CASE("enumerator matches the prefix-code oracle") {
  CHECK(Enumerator(Branch::parse("(0)")).at(0) == encode_oracle("0"));
  CHECK(Enumerator(Branch::parse("(0)")).at(0) == 2);
  CHECK(Enumerator(Branch::parse("(1)")).at(0) == encode_oracle("1"));
  CHECK(Enumerator(Branch::parse("(1)")).at(0) == 3);
  CHECK(Enumerator(Branch::parse("(01)")).at(2) == encode_oracle("010"));
  CHECK(Enumerator(Branch::parse("(01)")).at(2) == 10);
  // strictly increasing
  Enumerator h(Branch::parse("0110(10)"));
  for (std::uint64_t n = 0; n + 1 < 40; ++n) CHECK(h.at(n) < h.at(n + 1));
}

TEST_CASE("membership decodes through the prefix code") {
  ADSet a(Branch::parse("(0)"));
  CHECK(a.member(2));        // e("0")
  CHECK_FALSE(a.member(3));  // e("1") is not a prefix of 000...
  CHECK_FALSE(a.member(0));
  CHECK_FALSE(a.member(1));
  CHECK(a.member(4));  // e("00")
  CHECK_FALSE(a.member(5));
  ADSet b(Branch::parse("01(0)"));
  CHECK(b.member(encode_oracle("0")));
  CHECK(b.member(encode_oracle("01")));
  CHECK(b.member(encode_oracle("010")));
  CHECK_FALSE(b.member(encode_oracle("011")));
}

TEST_CASE("intersection size equals the common prefix length") {
  CHECK(intersection_size(Branch::parse("(0)"), Branch::parse("(1)")) == 0);
  CHECK(intersection_size(Branch::parse("0(1)"), Branch::parse("0(0)")) == 1);
  CHECK(intersection_size(Branch::parse("0101(0)"), Branch::parse("0101(1)")) == 4);
  CHECK_THROWS_AS(intersection_size(Branch::parse("(01)"), Branch::parse("0101(01)")),
                  DomainError);  // equal branches
}

TEST_CASE("almost disjointness checked two ways") {
  // formula (common prefix length) vs explicit enumeration through member()
  std::vector<Branch> branches = {Branch::parse("(0)"), Branch::parse("(1)"),
                                  Branch::parse("01(0)"), Branch::parse("0101(0)"),
                                  Branch::parse("0101(1)"), Branch::parse("(01)")};
  for (std::size_t x = 0; x < branches.size(); ++x) {
    for (std::size_t y = x + 1; y < branches.size(); ++y) {
      ADSet ax(branches[x]), ay(branches[y]);
      std::uint64_t counted = 0;
      for (std::uint64_t k = 0; k < (1u << 14); ++k)
        if (ax.member(k) && ay.member(k)) ++counted;
      // all common elements are encodings of prefixes of length <= 13 here
      CHECK(counted == intersection_size(branches[x], branches[y]));
    }
  }
}

TEST_CASE("enumerator lists the set in increasing order") {
  for (const char* text : {"(0)", "01(10)", "110(0)"}) {
    Branch b = Branch::parse(text);
    Enumerator h(b);
    ADSet a(b);
    std::vector<std::uint64_t> listed;
    for (std::uint64_t n = 0; n < 10; ++n) listed.push_back(h.at(n));
    std::vector<std::uint64_t> scanned;
    for (std::uint64_t k = 0; k < (1u << 11) && scanned.size() < 10; ++k)
      if (a.member(k)) scanned.push_back(k);
    CHECK(listed == scanned);
  }
}

TEST_CASE("finite intersection property for several branches") {
  std::vector<Branch> branches = {Branch::parse("(0)"), Branch::parse("0(1)"),
                                  Branch::parse("00(1)"), Branch::parse("01(0)")};
  std::uint64_t max_pairwise = 0;
  for (std::size_t x = 0; x < branches.size(); ++x)
    for (std::size_t y = x + 1; y < branches.size(); ++y)
      max_pairwise = std::max(max_pairwise, intersection_size(branches[x], branches[y]));
  // the common intersection of all is bounded by the max pairwise size
  std::uint64_t common = 0;
  for (std::uint64_t k = 0; k < (1u << 12); ++k) {
    bool in_all = true;
    for (const auto& b : branches) in_all = in_all && ADSet(b).member(k);
    if (in_all) ++common;
  }
  CHECK(common <= max_pairwise);
}

TEST_CASE("spike branches are pairwise distinct with known prefixes") {
  for (std::uint64_t n = 0; n < 8; ++n)
    for (std::uint64_t m = n + 1; m < 8; ++m)
      CHECK(intersection_size(Branch::spike(n), Branch::spike(m)) == n);
}
