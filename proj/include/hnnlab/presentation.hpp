#pragma once

#include "hnnlab/normalform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hnnlab {

/// Every failed invariant of p, one message per violation; empty iff valid.
inline std::vector<std::string> validate_presentation(const Presentation& p) {
  std::vector<std::string> out = structural_violations(p);
  if (!out.empty()) return out;
  const Group g(p);

  // Declared inverse pairs must have mutually inverse images.
  const auto& gens = p.generators;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!gens[i].inverse) continue;
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (gens[j].name != *gens[i].inverse) continue;
      Letter a = *g.alphabet().find(gens[i].name), b = *g.alphabet().find(gens[j].name);
      if (!word_problem(g, concat(g.expansion(a), g.expansion(b))))
        out.push_back("generators[" + std::to_string(j) + "]: involution/image mismatch ('" + gens[j].name +
                      "' is not the inverse of '" + gens[i].name + "')");
    }
  }

  // Sufficient generation condition: every stable letter occurs, and the
  // base vectors occurring in images span each vertex lattice.
  std::vector<bool> stable_seen(g.edge_count(), false);
  std::vector<BigVector> columns[2];
  for (Letter a = 0; a < g.alphabet().size(); ++a)
    for (const auto& s : g.expansion(a)) {
      if (const auto* st = as_stable(s))
        stable_seen[st->edge] = true;
      else
        columns[as_base(s)->vertex == Vertex::H ? 0 : 1].push_back(as_base(s)->value);
    }
  for (std::uint32_t e = 0; e < g.edge_count(); ++e)
    if (!stable_seen[e]) out.push_back("stable letter '" + g.edge(e).name + "' does not occur in any generator image");
  const int vertices = g.is_hnn() ? 1 : 2;
  for (int v = 0; v < vertices; ++v) {
    const Vertex tag = v == 0 ? Vertex::H : Vertex::K;
    const std::size_t n = g.rank(tag);
    if (n == 0) continue;
    const SnfResult s = smith(BigMatrix::from_columns(columns[v], n));
    bool spans = s.rank() == n;
    for (std::size_t i = 0; spans && i < n; ++i) spans = s.d(i, i) == 1;
    if (!spans)
      out.push_back(std::string("generator images do not span vertex group ") + vertex_name(tag) +
                    " (sufficient generation check)");
  }
  return out;
}

/// Validates p and compiles it; throws invalid_presentation on violations.
inline Group make_group(Presentation p) {
  if (auto v = validate_presentation(p); !v.empty()) throw invalid_presentation(std::move(v));
  return Group(std::move(p));
}

/// The image of a letter as base elements and stable letters.
inline const SyllableWord& expand_letter(const Group& g, Letter a) {
  if (a >= g.alphabet().size()) throw std::invalid_argument("expand_letter: unknown letter");
  return g.expansion(a);
}

inline const SyllableWord& expand_letter(const Group& g, const std::string& name) {
  auto a = g.alphabet().find(name);
  if (!a) throw std::invalid_argument("expand_letter: unknown letter '" + name + "'");
  return g.expansion(*a);
}

enum class Amenability { amenable, non_amenable, uncovered };

inline const char* to_string(Amenability a) {
  switch (a) {
    case Amenability::amenable: return "Amenable";
    case Amenability::non_amenable: return "NonAmenable";
    case Amenability::uncovered: return "Uncovered";
  }
  return "?";
}

/// Predicted amenability of the Schreier graph of G with respect to a vertex
/// group, from the indices of the edge groups alone.
inline Amenability classify_schreier_amenability(const Group& g, Vertex subgroup) {
  // nullopt (infinite index) compares as larger than every finite index
  auto at_least = [](const std::optional<BigInt>& index, int k) { return !index || *index >= k; };
  if (g.is_amalgam()) {
    const auto& a = g.presentation().amalgam();
    const auto ih = lattice_index(a.m_h), ik = lattice_index(a.m_k);
    if (!at_least(ih, 2) || !at_least(ik, 2)) return Amenability::uncovered;
    return at_least(ih, 3) || at_least(ik, 3) ? Amenability::non_amenable : Amenability::amenable;
  }
  if (subgroup != Vertex::H) throw std::invalid_argument("HNN extensions have a single vertex group H");
  if (g.edge_count() != 1) return Amenability::uncovered;
  const auto& e = g.presentation().hnn().edges.front();
  const auto ia = lattice_index(e.m_plus), ib = lattice_index(e.m_minus);
  return at_least(ia, 2) && at_least(ib, 2) ? Amenability::non_amenable : Amenability::amenable;
}

/// Rewrites a syllable word over the generator letters whose images are a
/// single base element or a single stable letter. nullopt if the letters at
/// hand cannot express it.
inline std::optional<Word> express_in_letters(const Group& g, const SyllableWord& w) {
  const Alphabet& alpha = g.alphabet();
  Word out;
  for (const auto& s : w) {
    if (const auto* st = as_stable(s)) {
      std::optional<Letter> hit;
      for (Letter a = 0; a < alpha.size() && !hit; ++a) {
        const auto& x = g.expansion(a);
        if (x.size() == 1 && as_stable(x[0]) && *as_stable(x[0]) == *st) hit = a;
      }
      if (!hit) return std::nullopt;
      out.push_back(*hit);
      continue;
    }
    const auto& b = *as_base(s);
    std::vector<Letter> letters;
    std::vector<BigVector> columns;
    for (Letter a = 0; a < alpha.size(); ++a) {
      const auto& x = g.expansion(a);
      if (x.size() == 1 && as_base(x[0]) && as_base(x[0])->vertex == b.vertex &&
          (!alpha.symmetric() || a < alpha.inverse(a))) {
        letters.push_back(a);
        columns.push_back(as_base(x[0])->value);
      }
    }
    if (letters.empty()) return std::nullopt;
    auto c = solve(BigMatrix::from_columns(columns, b.value.size()), b.value);
    if (!c) return std::nullopt;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if ((*c)[i] == 0) continue;
      if ((*c)[i] < 0 && !alpha.symmetric()) return std::nullopt;
      Letter a = (*c)[i] > 0 ? letters[i] : alpha.inverse(letters[i]);
      out.insert(out.end(), static_cast<std::size_t>(abs((*c)[i])), a);
    }
  }
  return out;
}

}  // namespace hnnlab
