#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "ordfree/errors.hpp"

namespace ordfree {

// An infinite binary sequence given by a finite seed followed by a repeating
// period: the index of one member of an almost-disjoint family.
//
// Canonical form: the period is cyclically minimal and the seed does not end
// with a bit the period could supply, so two branches compare equal exactly
// when their infinite bit sequences agree.
class Branch {
 public:
  Branch(std::vector<bool> seed, std::vector<bool> period)
      : seed_(std::move(seed)), period_(std::move(period)) {
    if (period_.empty()) throw DomainError("branch: period must be nonempty");
    canonicalize();
  }

  /// Parses `seed(period)`, e.g. `0101(0)` or `(01)`.
  static Branch parse(std::string_view text) {
    auto fail = [&] { throw ParseError("bad branch: '" + std::string(text) + "'"); };
    std::vector<bool> seed, period;
    std::size_t open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') fail();
    auto read_bits = [&](std::string_view s, std::vector<bool>& out) {
      for (char c : s) {
        if (c == '0')
          out.push_back(false);
        else if (c == '1')
          out.push_back(true);
        else
          fail();
      }
    };
    read_bits(text.substr(0, open), seed);
    read_bits(text.substr(open + 1, text.size() - open - 2), period);
    if (period.empty()) fail();
    return Branch(std::move(seed), std::move(period));
  }

  /// The n-th branch of a fixed injective enumeration: n zeros, a one, then zeros.
  static Branch spike(std::uint64_t n) {
    std::vector<bool> seed(n, false);
    seed.push_back(true);
    return Branch(std::move(seed), {false});
  }

  bool bit(std::uint64_t n) const {
    if (n < seed_.size()) return seed_[n];
    return period_[(n - seed_.size()) % period_.size()];
  }

  std::string str() const {
    std::string s;
    for (bool b : seed_) s += b ? '1' : '0';
    s += '(';
    for (bool b : period_) s += b ? '1' : '0';
    s += ')';
    return s;
  }

  const std::vector<bool>& seed() const { return seed_; }
  const std::vector<bool>& period() const { return period_; }

  bool operator==(const Branch& o) const { return seed_ == o.seed_ && period_ == o.period_; }
  // Lexicographic on the canonical form; a total order for use as a map key.
  bool operator<(const Branch& o) const {
    if (seed_ != o.seed_) return seed_ < o.seed_;
    return period_ < o.period_;
  }

 private:
  void canonicalize() {
    // minimal period: smallest divisor-length d that reproduces the period
    for (std::size_t d = 1; d < period_.size(); ++d) {
      if (period_.size() % d != 0) continue;
      bool ok = true;
      for (std::size_t k = d; k < period_.size() && ok; ++k) ok = period_[k] == period_[k % d];
      if (ok) {
        period_.resize(d);
        break;
      }
    }
    // absorb seed bits the rotated period would supply anyway
    while (!seed_.empty() && seed_.back() == period_.back()) {
      seed_.pop_back();
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    }
  }

  std::vector<bool> seed_;
  std::vector<bool> period_;
};

/// Length of the longest common prefix of two distinct branches; this equals
/// the size of the intersection of their encoded sets.
inline std::uint64_t common_prefix_length(const Branch& a, const Branch& b) {
  if (a == b) throw DomainError("branches must be distinct");
  // Distinct eventually-periodic sequences differ within seed+lcm(periods) bits.
  std::size_t horizon = a.seed().size() + b.seed().size() +
                        std::lcm(a.period().size(), b.period().size()) + 1;
  for (std::uint64_t n = 0; n < horizon; ++n)
    if (a.bit(n) != b.bit(n)) return n;
  throw DomainError("branches compare equal beyond horizon");  // unreachable
}

namespace detail {
/// Prefix code e(s) = 2^|s| + value(s), value read most-significant-bit first.
inline std::uint64_t encode_prefix(const Branch& b, std::uint64_t len) {
  if (len == 0 || len > 62) throw DomainError("prefix length out of range (1..62)");
  std::uint64_t v = 0;
  for (std::uint64_t n = 0; n < len; ++n) v = (v << 1) | (b.bit(n) ? 1u : 0u);
  return (std::uint64_t{1} << len) + v;
}
}  // namespace detail

// The almost-disjoint subset of N attached to a branch: the encodings of all
// of its finite prefixes. Two such sets intersect in exactly the encodings of
// the common prefixes, hence finitely.
class ADSet {
 public:
  explicit ADSet(Branch branch) : branch_(std::move(branch)) {}

  const Branch& branch() const { return branch_; }

  bool member(std::uint64_t k) const {
    if (k < 2) return false;
    std::uint64_t len = 63;
    while (!(k >> len)) --len;  // bit length - 1
    if (len > 62) return false;
    std::uint64_t v = k - (std::uint64_t{1} << len);
    for (std::uint64_t n = 0; n < len; ++n) {
      bool bit = (v >> (len - 1 - n)) & 1;
      if (bit != branch_.bit(n)) return false;
    }
    return true;
  }

 private:
  Branch branch_;
};

// h(n): the n-th element of the branch's set in increasing order, i.e. the
// encoding of the prefix of length n+1.
class Enumerator {
 public:
  explicit Enumerator(Branch branch) : branch_(std::move(branch)) {}

  std::uint64_t at(std::uint64_t n) const { return detail::encode_prefix(branch_, n + 1); }

  const Branch& branch() const { return branch_; }

 private:
  Branch branch_;
};

inline std::uint64_t intersection_size(const Branch& a, const Branch& b) {
  return common_prefix_length(a, b);
}

}  // namespace ordfree
