#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ordfree/word.hpp"

namespace ordfree {

// Finite permutations as arrays over {0..degree-1}; the component elements of
// a restricted direct product of symmetric groups.
using Perm = std::vector<std::uint32_t>;

inline bool perm_valid(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline bool perm_is_identity(const Perm& p) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != k) return false;
  return true;
}

inline Perm perm_identity(std::size_t degree) {
  Perm p(degree);
  for (std::size_t k = 0; k < degree; ++k) p[k] = static_cast<std::uint32_t>(k);
  return p;
}

/// (a * b)(x) = a(b(x)).
inline Perm perm_compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw DomainError("perm: degree mismatch");
  Perm out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[b[k]];
  return out;
}

inline Perm perm_inverse(const Perm& a) {
  Perm out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[a[k]] = static_cast<std::uint32_t>(k);
  return out;
}

// An element of a restricted direct product: finitely many non-identity
// coordinates, stored sparsely. Coordinates absent from the map are the
// identity of their component group.
class FinSupportElement {
 public:
  FinSupportElement() = default;

  explicit FinSupportElement(std::map<std::uint64_t, Perm> coords) : coords_(std::move(coords)) {
    for (auto it = coords_.begin(); it != coords_.end();) {
      if (!perm_valid(it->second)) throw DomainError("element: invalid permutation array");
      if (perm_is_identity(it->second))
        it = coords_.erase(it);
      else
        ++it;
    }
  }

  static FinSupportElement single(std::uint64_t coord, Perm p) {
    std::map<std::uint64_t, Perm> m;
    m.emplace(coord, std::move(p));
    return FinSupportElement(std::move(m));
  }

  const std::map<std::uint64_t, Perm>& coords() const { return coords_; }
  bool is_identity() const { return coords_.empty(); }

  /// i(g): the coordinates where g is not the identity, ascending.
  std::vector<std::uint64_t> support() const {
    std::vector<std::uint64_t> out;
    out.reserve(coords_.size());
    for (const auto& [a, p] : coords_) {
      (void)p;
      out.push_back(a);
    }
    return out;
  }

  const Perm* at(std::uint64_t coord) const {
    auto it = coords_.find(coord);
    return it == coords_.end() ? nullptr : &it->second;
  }

  FinSupportElement inverse() const {
    std::map<std::uint64_t, Perm> out;
    for (const auto& [a, p] : coords_) out.emplace(a, perm_inverse(p));
    return FinSupportElement(std::move(out));
  }

  bool operator==(const FinSupportElement& o) const { return coords_ == o.coords_; }

 private:
  std::map<std::uint64_t, Perm> coords_;
};

inline FinSupportElement multiply(const FinSupportElement& g1, const FinSupportElement& g2) {
  std::map<std::uint64_t, Perm> out = g1.coords();
  for (const auto& [a, p] : g2.coords()) {
    auto it = out.find(a);
    if (it == out.end())
      out.emplace(a, p);
    else
      it->second = perm_compose(it->second, p);
  }
  return FinSupportElement(std::move(out));
}

inline FinSupportElement commutator(const FinSupportElement& g1, const FinSupportElement& g2) {
  return multiply(multiply(g1, g2), multiply(g1.inverse(), g2.inverse()));
}

// --- relation search ----------------------------------------------------------

inline GeneratorId dirprod_generator_name(std::size_t k) {
  if (k < 26) return GeneratorId(std::string(1, static_cast<char>('a' + k)));
  return GeneratorId("x", static_cast<std::uint64_t>(k));
}

struct RelationSearchResult {
  bool found = false;
  Word word;
  std::size_t words_tried = 0;
};

inline FinSupportElement eval_element_word(const std::vector<FinSupportElement>& gens,
                                           const std::vector<std::pair<std::size_t, int>>& word) {
  FinSupportElement acc;
  for (const auto& [idx, exp] : word)
    acc = multiply(acc, exp > 0 ? gens[idx] : gens[idx].inverse());
  return acc;
}

/// Breadth-first search over reduced words in length-lexicographic order for
/// one that evaluates to the identity. Any hit is re-evaluated from scratch
/// before being reported; none-found is inconclusive by construction.
inline RelationSearchResult relation_search(const std::vector<FinSupportElement>& S,
                                            std::size_t max_len) {
  if (S.empty()) throw DomainError("relation search: empty generating set");
  RelationSearchResult result;
  std::vector<FinSupportElement> inverses;
  inverses.reserve(S.size());
  for (const auto& g : S) inverses.push_back(g.inverse());

  std::vector<std::pair<std::size_t, int>> word;     // (generator index, +-1)
  std::vector<FinSupportElement> partial{FinSupportElement()};

  auto letter_value = [&](std::size_t idx, int exp) -> const FinSupportElement& {
    return exp > 0 ? S[idx] : inverses[idx];
  };

  std::function<bool(std::size_t)> extend = [&](std::size_t remaining) -> bool {
    if (remaining == 0) {
      ++result.words_tried;
      return partial.back().is_identity();
    }
    for (std::size_t idx = 0; idx < S.size(); ++idx) {
      for (int exp : {+1, -1}) {
        if (!word.empty() && word.back().first == idx && word.back().second == -exp)
          continue;  // reduced words only
        word.emplace_back(idx, exp);
        partial.push_back(multiply(partial.back(), letter_value(idx, exp)));
        if (extend(remaining - 1)) return true;
        partial.pop_back();
        word.pop_back();
      }
    }
    return false;
  };

  for (std::size_t len = 1; len <= max_len; ++len) {
    if (extend(len)) {
      // verify from scratch and emit as a Word
      if (!eval_element_word(S, word).is_identity())
        throw DomainError("relation search: verification failed");  // unreachable
      std::vector<Letter> letters;
      for (const auto& [idx, exp] : word)
        letters.push_back(Letter{dirprod_generator_name(idx), exp});
      result.found = true;
      result.word = Word(std::move(letters));
      return result;
    }
  }
  return result;
}

// --- pigeonhole probe ---------------------------------------------------------

struct PigeonholeResult {
  bool found = false;
  std::size_t f_index = 0, g1_index = 0, g2_index = 0;
  std::vector<std::uint64_t> pattern;  // the shared support A
  // refinement path: coordinate and the component value agreed on (empty =
  // identity at that coordinate)
  std::vector<std::pair<std::uint64_t, Perm>> selections;
};

/// Finite-scale port of the support-refinement procedure: fix a support
/// pattern A, repeatedly select the (coordinate, value) pair that keeps the
/// most elements agreeing (smallest coordinate, then lexicographically least
/// value on ties), then look for a pair among the survivors whose commutator
/// commutes with everything supported exactly on A. The returned triple is
/// verified exactly.
inline PigeonholeResult pigeonhole_probe(const std::vector<FinSupportElement>& S) {
  if (S.size() < 3) throw DomainError("pigeonhole probe: need at least 3 elements");
  // candidate patterns: supports of the elements, by size then lex
  std::set<std::vector<std::uint64_t>> patterns;
  for (const auto& g : S) patterns.insert(g.support());
  std::vector<std::vector<std::uint64_t>> ordered(patterns.begin(), patterns.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });

  for (const auto& A : ordered) {
    std::vector<std::size_t> survivors(S.size());
    for (std::size_t k = 0; k < S.size(); ++k) survivors[k] = k;
    std::vector<std::pair<std::uint64_t, Perm>> selections;
    std::vector<std::uint64_t> remaining = A;

    while (!remaining.empty() && !survivors.empty()) {
      std::uint64_t best_coord = 0;
      std::optional<Perm> best_value;  // nullopt encodes the identity
      std::size_t best_count = 0;
      bool have_best = false;
      for (auto a : remaining) {
        std::map<std::optional<Perm>, std::size_t> counts;
        for (auto k : survivors) {
          const Perm* p = S[k].at(a);
          counts[p ? std::optional<Perm>(*p) : std::nullopt]++;
        }
        for (const auto& [value, count] : counts) {
          if (!have_best || count > best_count) {  // ties keep the earlier (a, value)
            have_best = true;
            best_count = count;
            best_coord = a;
            best_value = value;
          }
        }
      }
      std::vector<std::size_t> next;
      for (auto k : survivors) {
        const Perm* p = S[k].at(best_coord);
        const bool match = best_value ? (p && *p == *best_value) : (p == nullptr);
        if (match) next.push_back(k);
      }
      survivors = std::move(next);
      selections.emplace_back(best_coord, best_value ? *best_value : Perm{});
      remaining.erase(std::find(remaining.begin(), remaining.end(), best_coord));
    }

    std::vector<std::size_t> f_candidates;
    for (std::size_t k = 0; k < S.size(); ++k)
      if (S[k].support() == A) f_candidates.push_back(k);
    auto escapes = [&](std::size_t k) {
      for (auto a : S[k].support())
        if (!std::binary_search(A.begin(), A.end(), a)) return true;
      return false;
    };
    // prefer pairs whose supports escape A, as in the refinement argument
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t x = 0; x < survivors.size(); ++x) {
        for (std::size_t y = x + 1; y < survivors.size(); ++y) {
          std::size_t g1 = survivors[x], g2 = survivors[y];
          if (pass == 0 && (!escapes(g1) || !escapes(g2))) continue;
          FinSupportElement inner = commutator(S[g1], S[g2]);
          for (auto f : f_candidates) {
            if (commutator(S[f], inner).is_identity()) {
              PigeonholeResult out;
              out.found = true;
              out.f_index = f;
              out.g1_index = g1;
              out.g2_index = g2;
              out.pattern = A;
              out.selections = std::move(selections);
              return out;
            }
          }
        }
      }
    }
  }
  return PigeonholeResult{};
}

}  // namespace ordfree
