#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ordfree/witness.hpp"

namespace ordfree {

// Per-invocation knobs. A fixed seed makes every report byte-identical.
struct SessionConfig {
  std::uint64_t seed = 0;
  std::size_t budget_windows = 8;
  std::size_t grid_density = 12;
  std::size_t max_candidates = 50000;

  WitnessBudget witness_budget() const {
    WitnessBudget b;
    b.max_windows = budget_windows;
    b.grid_density = grid_density;
    b.max_candidates = max_candidates;
    return b;
  }
};

/// Writes via a sibling temp file and renames over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

// Deterministic sampling helpers. Draws avoid std::uniform_int_distribution
// so identical seeds give identical streams on every platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  std::int64_t integer_in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  Rational rational(std::int64_t num_range = 64, std::int64_t den_range = 16) {
    std::int64_t num = integer_in(-num_range, num_range);
    std::int64_t den = integer_in(1, den_range);
    return Rational(num, den);
  }

  /// Uniform reduced word of exactly the given length over the alphabet.
  Word reduced_word(const std::vector<GeneratorId>& alphabet, std::size_t length) {
    if (alphabet.empty()) throw DomainError("sampler: empty alphabet");
    std::vector<Letter> letters;
    while (letters.size() < length) {
      Letter l{alphabet[below(alphabet.size())], below(2) == 0 ? 1 : -1};
      if (!letters.empty() && letters.back().inverse_of(l)) continue;
      letters.push_back(std::move(l));
    }
    return Word(std::move(letters));
  }

  Word reduced_word_up_to(const std::vector<GeneratorId>& alphabet, std::size_t max_length) {
    return reduced_word(alphabet, 1 + below(max_length));
  }

  std::mt19937_64& raw() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace ordfree
