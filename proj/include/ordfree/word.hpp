#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ordfree/adfam.hpp"
#include "ordfree/map.hpp"

namespace ordfree {

// A generator name with an optional natural or branch index, e.g. f, f#3,
// g#01(0). Text form: name[#index][^-1].
struct GeneratorId {
  std::string name;
  std::variant<std::monostate, std::uint64_t, Branch> index;

  GeneratorId() = default;
  explicit GeneratorId(std::string n) : name(std::move(n)) {}
  GeneratorId(std::string n, std::uint64_t i) : name(std::move(n)), index(i) {}
  GeneratorId(std::string n, Branch b) : name(std::move(n)), index(std::move(b)) {}

  std::string str() const {
    std::string s = name;
    if (const auto* n = std::get_if<std::uint64_t>(&index)) s += "#" + std::to_string(*n);
    if (const auto* b = std::get_if<Branch>(&index)) s += "#" + b->str();
    return s;
  }

  bool operator==(const GeneratorId& o) const { return name == o.name && index == o.index; }
  bool operator<(const GeneratorId& o) const {
    if (name != o.name) return name < o.name;
    if (index.index() != o.index.index()) return index.index() < o.index.index();
    if (const auto* n = std::get_if<std::uint64_t>(&index))
      return *n < std::get<std::uint64_t>(o.index);
    if (const auto* b = std::get_if<Branch>(&index)) return *b < std::get<Branch>(o.index);
    return false;
  }
};

struct Letter {
  GeneratorId gen;
  int exp = 1;  // +1 or -1

  bool inverse_of(const Letter& o) const { return gen == o.gen && exp == -o.exp; }
  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};

// A word over an indexed generator alphabet; the unit of freeness testing.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (const auto& l : letters_)
      if (l.exp != 1 && l.exp != -1) throw DomainError("word: letter exponent must be +-1");
  }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  bool reduced() const {
    for (std::size_t k = 1; k < letters_.size(); ++k)
      if (letters_[k - 1].inverse_of(letters_[k])) return false;
    return true;
  }

  Word inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
      out.push_back(Letter{it->gen, -it->exp});
    return Word(std::move(out));
  }

  Word concat(const Word& o) const {
    std::vector<Letter> out = letters_;
    out.insert(out.end(), o.letters_.begin(), o.letters_.end());
    return Word(std::move(out));
  }

  /// Raised generator: g^k as |k| letters.
  static Word power(const GeneratorId& g, std::int64_t k) {
    std::vector<Letter> out;
    for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i)
      out.push_back(Letter{g, k < 0 ? -1 : 1});
    return Word(std::move(out));
  }

  bool operator==(const Word& o) const { return letters_ == o.letters_; }

  std::string str() const {
    std::string s;
    for (const auto& l : letters_) {
      if (!s.empty()) s += ' ';
      s += l.gen.str();
      if (l.exp == -1) s += "^-1";
    }
    return s;
  }

 private:
  std::vector<Letter> letters_;
};

/// Free reduction: cancels adjacent inverse pairs until none remain.
/// Idempotent; u u^-1 reduces to the empty word.
inline Word reduce(const Word& w) {
  std::vector<Letter> stack;
  for (const auto& l : w.letters()) {
    if (!stack.empty() && stack.back().inverse_of(l))
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return Word(std::move(stack));
}

/// Parses whitespace-separated letters `name[#index][^-1]`.
inline Word parse_word(std::string_view text) {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    std::string_view tok = text.substr(pos, end - pos);
    pos = end;
    Letter l;
    if (tok.size() >= 3 && tok.substr(tok.size() - 3) == "^-1") {
      l.exp = -1;
      tok.remove_suffix(3);
    }
    auto hash = tok.find('#');
    std::string_view name = tok.substr(0, hash == std::string_view::npos ? tok.size() : hash);
    if (name.empty()) throw ParseError("bad word letter: '" + std::string(tok) + "'");
    for (char c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError("bad word letter: '" + std::string(tok) + "'");
    l.gen.name = std::string(name);
    if (hash != std::string_view::npos) {
      std::string_view idx = tok.substr(hash + 1);
      if (idx.empty()) throw ParseError("bad word letter: '" + std::string(tok) + "'");
      if (idx.find('(') != std::string_view::npos) {
        l.gen.index = Branch::parse(idx);
      } else {
        std::uint64_t v = 0;
        for (char c : idx) {
          if (c < '0' || c > '9') throw ParseError("bad word letter: '" + std::string(tok) + "'");
          v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        l.gen.index = v;
      }
    }
    letters.push_back(std::move(l));
  }
  return Word(std::move(letters));
}

// A generator alphabet bound to map descriptors: a concrete action of a free
// group on the rational line.
struct Action {
  std::map<GeneratorId, MapDescriptor> alphabet;

  const MapDescriptor& at(const GeneratorId& g) const {
    auto it = alphabet.find(g);
    if (it == alphabet.end()) throw DomainError("action: unbound letter '" + g.str() + "'");
    return it->second;
  }
  bool bound(const GeneratorId& g) const { return alphabet.count(g) > 0; }
};

/// Applies the word right to left: the last letter acts first, so
/// eval(u v, x) = eval(u, eval(v, x)).
inline Rational eval_word(const Action& a, const Word& w, const Rational& x) {
  Rational v = x;
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const MapDescriptor& d = a.at(it->gen);
    v = it->exp > 0 ? d.eval(v) : d.eval_inverse(v);
  }
  return v;
}

/// The j-th element of the standard free basis of infinite rank inside the
/// group generated by f and g: w_j = f^-j g f^j.
inline Word rank_omega_word(std::uint64_t j, const GeneratorId& f, const GeneratorId& g) {
  Word out = Word::power(f, -static_cast<std::int64_t>(j));
  out = out.concat(Word({Letter{g, 1}}));
  return out.concat(Word::power(f, static_cast<std::int64_t>(j)));
}

/// The same basis element as a standalone descriptor over a bound pair.
inline MapDescriptor rank_omega_descriptor(std::uint64_t j, const MapDescriptor& f,
                                           const MapDescriptor& g) {
  if (j == 0) return g;
  return MapDescriptor::composed(
      {{f, -static_cast<std::int64_t>(j)}, {g, 1}, {f, static_cast<std::int64_t>(j)}});
}

}  // namespace ordfree
