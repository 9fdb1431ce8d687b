#pragma once

// Alphabets with formal inverses, free and cyclic reduction, and uniform
// word samplers.

#include "hnnlab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hnnlab {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;

class Alphabet {
 public:
  Alphabet() = default;

  /// `inverses`, when given, maps each letter to its formal inverse and must
  /// be a fixed-point-free involution.
  explicit Alphabet(std::vector<std::string> names,
                    std::optional<std::vector<Letter>> inverses = std::nullopt)
      : names_(std::move(names)), inverses_(std::move(inverses)) {
    for (Letter i = 0; i < names_.size(); ++i)
      if (!index_.emplace(names_[i], i).second)
        throw std::invalid_argument("duplicate letter name '" + names_[i] + "'");
    if (inverses_) {
      if (inverses_->size() != names_.size()) throw std::invalid_argument("involution is not total");
      for (Letter i = 0; i < names_.size(); ++i) {
        Letter j = (*inverses_)[i];
        if (j >= names_.size()) throw std::invalid_argument("involution maps outside the alphabet");
        if (j == i) throw std::invalid_argument("letter '" + names_[i] + "' is its own formal inverse");
        if ((*inverses_)[j] != i) throw std::invalid_argument("involution is not self-inverse");
      }
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(Letter a) const { return names_.at(a); }
  const std::vector<std::string>& names() const { return names_; }
  bool symmetric() const { return inverses_.has_value(); }

  Letter inverse(Letter a) const {
    if (!inverses_) throw std::logic_error("alphabet has no involution");
    return (*inverses_)[a];
  }

  std::optional<Letter> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> names_;
  std::optional<std::vector<Letter>> inverses_;
  std::unordered_map<std::string, Letter> index_;
};

namespace detail {
inline void require_symmetric(const Alphabet& alphabet, const char* what) {
  if (!alphabet.symmetric()) throw std::invalid_argument(std::string(what) + ": alphabet is not symmetric");
}
}  // namespace detail

inline Word free_reduce(const Alphabet& alphabet, const Word& w) {
  detail::require_symmetric(alphabet, "free_reduce");
  Word out;
  out.reserve(w.size());
  for (Letter a : w) {
    if (!out.empty() && out.back() == alphabet.inverse(a))
      out.pop_back();
    else
      out.push_back(a);
  }
  return out;
}

inline Word invert_word(const Alphabet& alphabet, const Word& w) {
  detail::require_symmetric(alphabet, "invert_word");
  Word out(w.rbegin(), w.rend());
  for (auto& a : out) a = alphabet.inverse(a);
  return out;
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w == conjugator * core * conjugator^-1 in the free group
};

inline CyclicReduction cyclic_reduce(const Alphabet& alphabet, const Word& w) {
  Word r = free_reduce(alphabet, w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[hi - 1] == alphabet.inverse(r[lo])) {
    ++lo;
    --hi;
  }
  return {Word(r.begin() + lo, r.begin() + hi), Word(r.begin(), r.begin() + lo)};
}

inline bool is_cyclically_reduced(const Alphabet& alphabet, const Word& w) {
  if (free_reduce(alphabet, w).size() != w.size()) return false;
  return w.size() < 2 || w.back() != alphabet.inverse(w.front());
}

enum class SampleMode { all, reduced, cyc_reduced };

/// Uniform sample from Sigma^n, from the reduced words of length n, or from
/// the cyclically reduced words of length n (by rejection).
inline Word sample_word(const Alphabet& alphabet, std::size_t n, SampleMode mode, Rng& rng) {
  const std::size_t d = alphabet.size();
  if (d == 0 && n > 0) throw std::invalid_argument("sample_word: empty alphabet");
  if (mode != SampleMode::all) {
    detail::require_symmetric(alphabet, "sample_word");
    if (d < 3) throw std::invalid_argument("sample_word: reduced sampling needs at least 3 letters");
  }
  Word w(n);
  if (mode == SampleMode::all) {
    for (auto& a : w) a = static_cast<Letter>(uniform_below(rng, d));
    return w;
  }
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0) {
        w[i] = static_cast<Letter>(uniform_below(rng, d));
      } else {
        // Uniform over the d-1 letters other than the inverse of w[i-1].
        const Letter banned = alphabet.inverse(w[i - 1]);
        Letter a = static_cast<Letter>(uniform_below(rng, d - 1));
        w[i] = a >= banned ? a + 1 : a;
      }
    }
    if (mode == SampleMode::reduced || n < 2 || w.back() != alphabet.inverse(w.front())) return w;
  }
}

/// Parses whitespace-separated letter tokens. A token naming no letter but
/// ending in an apostrophe denotes the formal inverse of its prefix, and
/// `x^k` repeats a token k times.
inline Word parse_word(const Alphabet& alphabet, std::string_view text) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    std::size_t repeat = 1;
    if (auto caret = token.rfind('^'); caret != std::string::npos && !alphabet.find(token)) {
      const std::string count = token.substr(caret + 1);
      if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad exponent in token '" + token + "'");
      repeat = std::stoull(count);
      token.resize(caret);
    }
    std::optional<Letter> letter = alphabet.find(token);
    if (!letter && token.size() > 1 && token.back() == '\'' && alphabet.symmetric()) {
      if (auto base = alphabet.find(std::string_view(token).substr(0, token.size() - 1)))
        letter = alphabet.inverse(*base);
    }
    if (!letter) throw std::invalid_argument("unknown letter '" + token + "'");
    w.insert(w.end(), repeat, *letter);
  }
  return w;
}

/// Inverse of parse_word; runs of one letter are written as `x^k`.
inline std::string format_word(const Alphabet& alphabet, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!out.empty()) out += ' ';
    out += alphabet.name(w[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace hnnlab
