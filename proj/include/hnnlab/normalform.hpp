#pragma once

// Britton reduction, cyclic Britton reduction and the unique normal forms of
// HNN extensions and amalgamated products over free abelian vertex groups.
//
// HNN normal form: x0 t^e1 x1 ... t^ek xk where x_i (i >= 1) is the residue
// of x_i modulo A when e_i = +1 and modulo B = phi(A) when e_i = -1, and no
// t^e 0 t^-e factor occurs. Amalgam normal form: x0 x1 ... xk with x_i
// (i >= 1) nonzero residues modulo A in alternating vertex groups.

#include "hnnlab/group.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hnnlab {

struct TailLink {
  std::optional<StableSyllable> stable;  // empty for amalgams
  BaseSyllable base;
  friend bool operator==(const TailLink&, const TailLink&) = default;
};

struct NormalForm {
  BaseSyllable head;
  std::vector<TailLink> tail;
  friend bool operator==(const NormalForm&, const NormalForm&) = default;

  bool is_identity() const { return tail.empty() && is_zero(head.value); }
};

inline std::size_t hash_value(const BaseSyllable& b) {
  return hash_combine(static_cast<std::size_t>(b.vertex), BigVectorHash{}(b.value));
}

inline std::size_t hash_value(const std::vector<TailLink>& tail) {
  std::size_t seed = tail.size();
  for (const auto& l : tail) {
    if (l.stable) seed = hash_combine(seed, (std::size_t(l.stable->edge) << 2) ^ std::size_t(l.stable->exp + 1));
    seed = hash_combine(seed, hash_value(l.base));
  }
  return seed;
}

struct NormalFormHash {
  std::size_t operator()(const NormalForm& nf) const {
    return hash_combine(hash_value(nf.head), hash_value(nf.tail));
  }
};

inline SyllableWord to_syllables(const Group& g, const Word& w) {
  SyllableWord out;
  for (Letter a : w) {
    if (a >= g.alphabet().size()) throw std::invalid_argument("to_syllables: unknown letter");
    append(out, g.expansion(a));
  }
  return out;
}

inline SyllableWord as_syllables(const NormalForm& nf) {
  SyllableWord w;
  push_syllable(w, nf.head);
  for (const auto& l : nf.tail) {
    if (l.stable) w.push_back(*l.stable);
    push_syllable(w, l.base);
  }
  return w;
}

namespace detail {

/// phi^{+-1}(x) for the pinch t^open x t^-open, when x lies in the
/// associated subgroup.
inline std::optional<BigVector> pinch_image(const Group& g, std::uint32_t edge, int open, const BigVector& x) {
  const auto& e = g.edge(edge);
  auto y = e.lattice(open).preimage(x);
  if (!y) return std::nullopt;
  return e.lattice(-open).basis() * *y;
}

/// Amalgams: an element of A written in the other vertex group.
inline BaseSyllable cross(const Group& g, const BaseSyllable& b) {
  auto y = g.edge_lattice(b.vertex).preimage(b.value);
  if (!y) throw std::logic_error("cross: element is not in the edge group");
  Vertex to = other(b.vertex);
  return {to, g.edge_lattice(to).basis() * *y};
}

inline bool in_edge_group(const Group& g, const BaseSyllable& b) {
  return g.edge_lattice(b.vertex).contains(b.value);
}

inline SyllableWord britton_reduce_hnn(const Group& g, const SyllableWord& w) {
  SyllableWord out;
  out.reserve(w.size());
  const BigVector zero = zero_vector(g.rank(Vertex::H));
  for (const auto& s : w) {
    const auto* st = as_stable(s);
    if (!st) {
      push_syllable(out, s);
      continue;
    }
    // Leftmost-innermost: only the factor ending at s can be new.
    std::size_t n = out.size(), open = n;
    const BigVector* mid = &zero;
    if (n >= 1 && as_stable(out[n - 1])) {
      open = n - 1;
    } else if (n >= 2 && as_stable(out[n - 2])) {
      open = n - 2;
      mid = &as_base(out[n - 1])->value;
    }
    if (open < n) {
      const auto* o = as_stable(out[open]);
      if (o->edge == st->edge && o->exp == -st->exp) {
        if (auto image = pinch_image(g, st->edge, o->exp, *mid)) {
          out.resize(open);
          push_syllable(out, BaseSyllable{Vertex::H, std::move(*image)});
          continue;
        }
      }
    }
    out.push_back(s);
  }
  return out;
}

inline void push_amalgam(const Group& g, SyllableWord& out, BaseSyllable y) {
  if (is_zero(y.value)) return;
  if (out.empty()) {
    out.emplace_back(std::move(y));
    return;
  }
  auto& top = std::get<BaseSyllable>(out.back());
  if (top.vertex == y.vertex) {
    top.value += y.value;
    if (is_zero(top.value)) {
      out.pop_back();
    } else if (out.size() >= 2 && in_edge_group(g, top)) {
      BaseSyllable moved = cross(g, top);
      out.pop_back();
      std::get<BaseSyllable>(out.back()).value += moved.value;
    }
    return;
  }
  if (in_edge_group(g, y)) {
    top.value += cross(g, y).value;
    if (is_zero(top.value)) out.pop_back();
    return;
  }
  if (out.size() == 1 && in_edge_group(g, top)) {
    BaseSyllable moved = cross(g, top);
    moved.value += y.value;
    out.back() = std::move(moved);
    return;
  }
  out.emplace_back(std::move(y));
}

inline SyllableWord britton_reduce_amalgam(const Group& g, const SyllableWord& w) {
  SyllableWord out;
  for (const auto& s : w) {
    const auto* b = as_base(s);
    if (!b) throw std::invalid_argument("britton_reduce: amalgam words have no stable letters");
    push_amalgam(g, out, *b);
  }
  if (out.size() == 1) {
    auto& only = std::get<BaseSyllable>(out.front());
    if (only.vertex == Vertex::K && in_edge_group(g, only)) only = cross(g, only);
  }
  return out;
}

}  // namespace detail

/// Removes every pinch, leftmost-innermost first. The result equals w in G.
inline SyllableWord britton_reduce(const Group& g, const SyllableWord& w) {
  return g.is_hnn() ? detail::britton_reduce_hnn(g, w) : detail::britton_reduce_amalgam(g, w);
}

/// Positions at which a single Britton reduction applies. HNN: index of the
/// opening stable letter of t^e x t^-e with x in the associated subgroup.
/// Amalgam: index of a syllable lying in A, when w has at least two.
inline std::vector<std::size_t> pinch_sites(const Group& g, const SyllableWord& w) {
  std::vector<std::size_t> sites;
  if (g.is_hnn()) {
    const BigVector zero = zero_vector(g.rank(Vertex::H));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto* o = as_stable(w[i]);
      if (!o) continue;
      std::size_t close = i + 1;
      const BigVector* mid = &zero;
      if (close < w.size() && as_base(w[close])) mid = &as_base(w[close++])->value;
      if (close >= w.size()) continue;
      const auto* c = as_stable(w[close]);
      if (c && c->edge == o->edge && c->exp == -o->exp && g.edge(o->edge).lattice(o->exp).contains(*mid))
        sites.push_back(i);
    }
  } else if (w.size() >= 2) {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (detail::in_edge_group(g, std::get<BaseSyllable>(w[i]))) sites.push_back(i);
  }
  return sites;
}

/// Applies the single reduction at a site returned by pinch_sites.
inline SyllableWord apply_pinch(const Group& g, const SyllableWord& w, std::size_t site) {
  SyllableWord out(w.begin(), w.begin() + site);
  std::size_t next;
  if (g.is_hnn()) {
    const auto& o = std::get<StableSyllable>(w[site]);
    BigVector mid = zero_vector(g.rank(Vertex::H));
    next = site + 1;
    if (as_base(w[next])) mid = as_base(w[next++])->value;
    auto image = detail::pinch_image(g, o.edge, o.exp, mid);
    if (!image) throw std::invalid_argument("apply_pinch: no pinch at site");
    ++next;
    push_syllable(out, BaseSyllable{Vertex::H, std::move(*image)});
  } else {
    push_syllable(out, detail::cross(g, std::get<BaseSyllable>(w[site])));
    next = site + 1;
  }
  for (; next < w.size(); ++next) push_syllable(out, w[next]);
  return out;
}

struct CyclicCore {
  SyllableWord core;
  SyllableWord conjugator;  // w == conjugator * core * conjugator^-1 in G
};

/// Conjugates w to a word whose square is Britton-reduced, rotating one
/// syllable block at a time into the conjugator.
inline CyclicCore cyclic_britton_reduce(const Group& g, const SyllableWord& w) {
  CyclicCore r{britton_reduce(g, w), {}};
  SyllableWord& core = r.core;
  if (g.is_amalgam()) {
    while (core.size() >= 2 &&
           std::get<BaseSyllable>(core.front()).vertex == std::get<BaseSyllable>(core.back()).vertex) {
      Syllable first = core.front();
      SyllableWord rotated(core.begin() + 1, core.end());
      push_syllable(rotated, first);
      core = britton_reduce(g, rotated);
      push_syllable(r.conjugator, first);
    }
    return r;
  }
  for (;;) {
    if (stable_count(core) == 0) return r;
    if (as_base(core.front())) {
      Syllable first = core.front();
      SyllableWord rotated(core.begin() + 1, core.end());
      push_syllable(rotated, first);
      core = std::move(rotated);
      push_syllable(r.conjugator, first);
    }
    std::size_t last = core.size() - 1;
    while (!as_stable(core[last])) --last;
    const auto& s1 = std::get<StableSyllable>(core.front());
    const auto& sk = std::get<StableSyllable>(core[last]);
    const BigVector y = last + 1 < core.size() ? as_base(core.back())->value : zero_vector(g.rank(Vertex::H));
    if (sk.edge != s1.edge || sk.exp != -s1.exp || !g.edge(sk.edge).lattice(sk.exp).contains(y)) return r;
    SyllableWord block(core.begin() + last, core.end());
    SyllableWord rotated = block;
    for (std::size_t i = 0; i < last; ++i) push_syllable(rotated, core[i]);
    append(r.conjugator, invert(block));
    core = britton_reduce(g, rotated);
  }
}

namespace detail {

inline NormalForm normal_form_hnn(const Group& g, const SyllableWord& w) {
  BigVector head = zero_vector(g.rank(Vertex::H));
  std::vector<TailLink> rev;  // tail in reverse order
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (const auto* b = as_base(*it)) {
      head += b->value;
      continue;
    }
    const auto& s = std::get<StableSyllable>(*it);
    const auto& e = g.edge(s.edge);
    // head = M_s y + c with c the residue modulo the lattice next to t^s;
    // t^s (M_s y) = (M_-s y) t^s moves the lattice part to the left.
    auto split = e.lattice(s.exp).split(head);
    BigVector carried = e.lattice(-s.exp).basis() * split.coefficients;
    if (is_zero(split.residue) && !rev.empty() && rev.back().stable == StableSyllable{s.edge, -s.exp}) {
      head = std::move(carried);
      head += rev.back().base.value;
      rev.pop_back();
    } else {
      rev.push_back({s, {Vertex::H, std::move(split.residue)}});
      head = std::move(carried);
    }
  }
  std::reverse(rev.begin(), rev.end());
  return {{Vertex::H, std::move(head)}, std::move(rev)};
}

inline NormalForm normal_form_amalgam(const Group& g, const SyllableWord& w) {
  BaseSyllable head{Vertex::H, zero_vector(g.rank(Vertex::H))};
  std::vector<TailLink> rev;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto* b = as_base(*it);
    if (!b) throw std::invalid_argument("normal_form: amalgam words have no stable letters");
    if (is_zero(head.value)) {
      head = *b;
    } else if (head.vertex == b->vertex) {
      head.value += b->value;
    } else {
      auto split = g.edge_lattice(head.vertex).split(head.value);
      if (!is_zero(split.residue)) rev.push_back({std::nullopt, {head.vertex, std::move(split.residue)}});
      BigVector moved = g.edge_lattice(b->vertex).basis() * split.coefficients;
      head = {b->vertex, std::move(moved)};
      head.value += b->value;
    }
    // An element of A in front of a tail link belongs to that link's vertex.
    if (!rev.empty() && in_edge_group(g, head)) {
      BaseSyllable moved = cross(g, head);
      moved.value += rev.back().base.value;
      head = std::move(moved);
      rev.pop_back();
    }
  }
  if (rev.empty() && head.vertex == Vertex::K && in_edge_group(g, head)) head = cross(g, head);
  if (is_zero(head.value)) head.vertex = Vertex::H;
  std::reverse(rev.begin(), rev.end());
  return {std::move(head), std::move(rev)};
}

}  // namespace detail

/// The unique normal form of the element represented by w, built right to
/// left.
inline NormalForm normal_form(const Group& g, const SyllableWord& w) {
  return g.is_hnn() ? detail::normal_form_hnn(g, w) : detail::normal_form_amalgam(g, w);
}

inline NormalForm normal_form(const Group& g, const Word& w) { return normal_form(g, to_syllables(g, w)); }

inline bool word_problem(const Group& g, const SyllableWord& w) { return normal_form(g, w).is_identity(); }
inline bool word_problem(const Group& g, const Word& w) { return word_problem(g, to_syllables(g, w)); }

inline bool equal_in_group(const Group& g, const SyllableWord& a, const SyllableWord& b) {
  return normal_form(g, a) == normal_form(g, b);
}

/// Whether core is conjugate into a vertex group; assumes core is the
/// output of cyclic_britton_reduce.
inline bool is_elliptic_core(const Group& g, const SyllableWord& core) {
  return g.is_hnn() ? stable_count(core) == 0 : core.size() <= 1;
}

enum class ElementKind { elliptic, hyperbolic };

struct ElementClass {
  ElementKind kind;
  CyclicCore reduction;
};

inline ElementClass classify_element(const Group& g, const SyllableWord& w) {
  CyclicCore c = cyclic_britton_reduce(g, w);
  ElementKind k = is_elliptic_core(g, c.core) ? ElementKind::elliptic : ElementKind::hyperbolic;
  return {k, std::move(c)};
}

inline ElementClass classify_element(const Group& g, const Word& w) {
  return classify_element(g, to_syllables(g, w));
}

inline std::string format_syllable(const Group& g, const Syllable& s) {
  if (const auto* b = as_base(s)) return std::string(1, vertex_name(b->vertex)) + to_string(b->value);
  const auto& st = std::get<StableSyllable>(s);
  return g.edge(st.edge).name + (st.exp > 0 ? "" : "^-1");
}

inline std::string format_syllables(const Group& g, const SyllableWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += format_syllable(g, s);
  }
  return out;
}

inline std::string format_normal_form(const Group& g, const NormalForm& nf) {
  std::string out = format_syllable(g, nf.head);
  for (const auto& l : nf.tail) {
    out += " |";
    if (l.stable) out += " " + format_syllable(g, *l.stable);
    out += " " + format_syllable(g, l.base);
  }
  return out;
}

}  // namespace hnnlab
