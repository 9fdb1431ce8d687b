#pragma once

#include "hnnlab/bigint.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace hnnlab {

/// Vertex group tag. HNN extensions only use H.
enum class Vertex : std::uint8_t { H, K };

inline Vertex other(Vertex v) { return v == Vertex::H ? Vertex::K : Vertex::H; }
inline char vertex_name(Vertex v) { return v == Vertex::H ? 'H' : 'K'; }

/// An element of a free abelian vertex group, written additively.
struct BaseSyllable {
  Vertex vertex = Vertex::H;
  BigVector value;
  friend bool operator==(const BaseSyllable&, const BaseSyllable&) = default;
};

/// A stable letter t_edge^exp with exp = +1 or -1.
struct StableSyllable {
  std::uint32_t edge = 0;
  int exp = 1;
  friend bool operator==(const StableSyllable&, const StableSyllable&) = default;
};

using Syllable = std::variant<BaseSyllable, StableSyllable>;
using SyllableWord = std::vector<Syllable>;

inline const BaseSyllable* as_base(const Syllable& s) { return std::get_if<BaseSyllable>(&s); }
inline const StableSyllable* as_stable(const Syllable& s) { return std::get_if<StableSyllable>(&s); }

/// Appends s, merging it into a trailing base syllable of the same vertex
/// and dropping identity syllables.
inline void push_syllable(SyllableWord& w, Syllable s) {
  if (auto* b = std::get_if<BaseSyllable>(&s)) {
    if (is_zero(b->value)) return;
    if (!w.empty())
      if (auto* top = std::get_if<BaseSyllable>(&w.back()); top && top->vertex == b->vertex) {
        top->value += b->value;
        if (is_zero(top->value)) w.pop_back();
        return;
      }
  }
  w.push_back(std::move(s));
}

inline SyllableWord& append(SyllableWord& w, const SyllableWord& tail) {
  for (const auto& s : tail) push_syllable(w, s);
  return w;
}

inline SyllableWord concat(SyllableWord a, const SyllableWord& b) { return append(a, b); }

inline SyllableWord concat(SyllableWord a, const SyllableWord& b, const SyllableWord& c) {
  append(a, b);
  return append(a, c);
}

inline Syllable invert(const Syllable& s) {
  if (auto* b = as_base(s)) return BaseSyllable{b->vertex, -b->value};
  auto st = std::get<StableSyllable>(s);
  return StableSyllable{st.edge, -st.exp};
}

inline SyllableWord invert(const SyllableWord& w) {
  SyllableWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) push_syllable(out, invert(*it));
  return out;
}

inline std::size_t stable_count(const SyllableWord& w) {
  std::size_t n = 0;
  for (const auto& s : w) n += as_stable(s) != nullptr;
  return n;
}

}  // namespace hnnlab
