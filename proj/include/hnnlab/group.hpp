#pragma once

// Splittings over free abelian vertex groups: the raw presentation data read
// from configuration files and its compiled form, Group.

#include "hnnlab/intlin.hpp"
#include "hnnlab/syllable.hpp"
#include "hnnlab/words.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace hnnlab {

/// Relation t (m_plus x) t^-1 = m_minus x for x in Z^m.
struct StableEdge {
  std::string name;
  BigMatrix m_plus;
  BigMatrix m_minus;
};

struct HnnPresentation {
  std::size_t base_rank = 0;
  std::vector<StableEdge> edges;
};

/// H = Z^h_rank and K = Z^k_rank glued along Z^m via m_h and m_k.
struct AmalgamPresentation {
  std::size_t h_rank = 0;
  std::size_t k_rank = 0;
  BigMatrix m_h;
  BigMatrix m_k;
};

struct BaseImage {
  Vertex vertex = Vertex::H;
  BigVector vector;
};

struct StableImage {
  std::string edge;
  int exp = 1;
};

using ImagePart = std::variant<BaseImage, StableImage>;

struct GeneratorSpec {
  std::string name;
  std::optional<std::string> inverse;
  std::vector<ImagePart> image;
  bool expansion = false;  // image was written as a list
};

struct Presentation {
  std::variant<HnnPresentation, AmalgamPresentation> splitting;
  std::vector<GeneratorSpec> generators;

  bool is_hnn() const { return std::holds_alternative<HnnPresentation>(splitting); }
  const HnnPresentation& hnn() const { return std::get<HnnPresentation>(splitting); }
  const AmalgamPresentation& amalgam() const { return std::get<AmalgamPresentation>(splitting); }
};

class invalid_presentation : public std::runtime_error {
 public:
  explicit invalid_presentation(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid presentation";
    for (const auto& x : v) s += "; " + x;
    return s;
  }
  std::vector<std::string> violations_;
};

namespace detail {

inline void check_embedding(const BigMatrix& m, std::size_t rows, const std::string& where,
                            std::vector<std::string>& out) {
  if (m.rows() != rows) {
    out.push_back(where + ": has " + std::to_string(m.rows()) + " rows, expected " + std::to_string(rows));
    return;
  }
  if (rank(m) != m.cols()) out.push_back(where + ": embedding not injective");
}

inline bool index_one(const BigMatrix& m) {
  auto index = lattice_index(m);
  return index && *index == 1;
}

}  // namespace detail

/// Violations that can be detected without solving the word problem.
inline std::vector<std::string> structural_violations(const Presentation& p) {
  std::vector<std::string> out;
  std::unordered_set<std::string> edge_names;
  if (p.is_hnn()) {
    const auto& h = p.hnn();
    if (h.edges.empty()) out.push_back("hnn: at least one stable letter required");
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
      const auto& e = h.edges[i];
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (e.name.empty()) out.push_back(where + ": empty stable letter name");
      if (!edge_names.insert(e.name).second) out.push_back(where + ": duplicate stable letter '" + e.name + "'");
      if (e.m_plus.cols() != e.m_minus.cols()) out.push_back(where + ": m_plus and m_minus column counts differ");
      detail::check_embedding(e.m_plus, h.base_rank, where + ".m_plus", out);
      detail::check_embedding(e.m_minus, h.base_rank, where + ".m_minus", out);
    }
  } else {
    const auto& a = p.amalgam();
    const std::size_t before = out.size();
    if (a.m_h.cols() != a.m_k.cols()) out.push_back("m_h and m_k column counts differ");
    detail::check_embedding(a.m_h, a.h_rank, "m_h", out);
    detail::check_embedding(a.m_k, a.k_rank, "m_k", out);
    if (out.size() == before) {
      if (detail::index_one(a.m_h)) out.push_back("m_h: not a proper amalgam ([H:A] = 1)");
      if (detail::index_one(a.m_k)) out.push_back("m_k: not a proper amalgam ([K:A] = 1)");
    }
  }

  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, std::string> partner;
  auto pair_up = [&](const std::string& a, const std::string& b, const std::string& where) {
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      auto [it, fresh] = partner.emplace(x, y);
      if (!fresh && it->second != y) {
        out.push_back(where + ": involution is not self-inverse ('" + x + "' paired with both '" + it->second +
                      "' and '" + y + "')");
        return;
      }
    }
  };
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    const auto& g = p.generators[i];
    const std::string where = "generators[" + std::to_string(i) + "]";
    if (g.name.empty()) out.push_back(where + ": empty letter name");
    if (!seen.insert(g.name).second) out.push_back(where + ": duplicate letter '" + g.name + "'");
    if (g.inverse) {
      if (*g.inverse == g.name)
        out.push_back(where + ": letter '" + g.name + "' is its own formal inverse");
      else
        pair_up(g.name, *g.inverse, where);
    }
    for (std::size_t k = 0; k < g.image.size(); ++k) {
      const std::string part = where + ".image[" + std::to_string(k) + "]";
      if (auto* b = std::get_if<BaseImage>(&g.image[k])) {
        if (p.is_hnn()) {
          if (b->vertex != Vertex::H) out.push_back(part + ": HNN extensions have only vertex H");
          else if (b->vector.size() != p.hnn().base_rank) out.push_back(part + ": vector has wrong dimension");
        } else {
          std::size_t r = b->vertex == Vertex::H ? p.amalgam().h_rank : p.amalgam().k_rank;
          if (b->vector.size() != r) out.push_back(part + ": vector has wrong dimension");
        }
      } else {
        const auto& s = std::get<StableImage>(g.image[k]);
        if (!p.is_hnn()) out.push_back(part + ": amalgams have no stable letters");
        else if (!edge_names.count(s.edge)) out.push_back(part + ": unknown stable letter '" + s.edge + "'");
        if (s.exp != 1 && s.exp != -1) out.push_back(part + ": stable exponent must be +1 or -1");
      }
    }
  }
  return out;
}

/// Compiled splitting plus generating set. Construction requires the
/// structural checks to pass; semantic checks live in validate_presentation.
class Group {
 public:
  struct Edge {
    std::string name;
    Lattice plus;   // A = image of m_plus
    Lattice minus;  // B = phi(A) = image of m_minus
    /// Lattice of the associated subgroup adjacent to t^exp on its right.
    const Lattice& lattice(int exp) const { return exp > 0 ? plus : minus; }
  };

  explicit Group(Presentation p) : presentation_(std::move(p)) {
    if (auto v = structural_violations(presentation_); !v.empty()) throw invalid_presentation(std::move(v));
    if (presentation_.is_hnn()) {
      const auto& h = presentation_.hnn();
      ranks_[0] = h.base_rank;
      for (std::uint32_t i = 0; i < h.edges.size(); ++i) {
        edges_.push_back({h.edges[i].name, Lattice(h.edges[i].m_plus), Lattice(h.edges[i].m_minus)});
        edge_index_.emplace(h.edges[i].name, i);
      }
    } else {
      const auto& a = presentation_.amalgam();
      ranks_[0] = a.h_rank;
      ranks_[1] = a.k_rank;
      amalgam_h_ = Lattice(a.m_h);
      amalgam_k_ = Lattice(a.m_k);
    }
    build_alphabet();
  }

  const Presentation& presentation() const { return presentation_; }
  bool is_hnn() const { return presentation_.is_hnn(); }
  bool is_amalgam() const { return !is_hnn(); }

  std::size_t rank(Vertex v) const { return ranks_[v == Vertex::H ? 0 : 1]; }

  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(std::uint32_t i) const { return edges_.at(i); }
  std::optional<std::uint32_t> edge_index(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Amalgams: the edge lattice A inside vertex group v.
  const Lattice& edge_lattice(Vertex v) const { return v == Vertex::H ? amalgam_h_ : amalgam_k_; }

  const Alphabet& alphabet() const { return alphabet_; }
  const SyllableWord& expansion(Letter a) const { return expansions_.at(a); }

  /// Index of the generator spec a letter came from, and whether the letter
  /// is that spec's implicit inverse.
  std::pair<std::size_t, bool> origin(Letter a) const { return origins_.at(a); }

  BaseSyllable identity() const { return {Vertex::H, zero_vector(rank(Vertex::H))}; }

 private:
  void build_alphabet() {
    const auto& gens = presentation_.generators;
    std::unordered_set<std::string> declared;
    for (const auto& g : gens) declared.insert(g.name);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      names.push_back(gens[i].name);
      origins_.emplace_back(i, false);
      expansions_.push_back(image_word(gens[i].image));
      if (gens[i].inverse && !declared.count(*gens[i].inverse)) {
        names.push_back(*gens[i].inverse);
        origins_.emplace_back(i, true);
        expansions_.push_back(invert(expansions_.back()));
      }
    }
    std::unordered_map<std::string, Letter> index;
    for (Letter i = 0; i < names.size(); ++i) index.emplace(names[i], i);
    std::vector<Letter> inv(names.size(), Letter(-1));
    bool symmetric = true;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!gens[i].inverse) continue;
      Letter a = index.at(gens[i].name), b = index.at(*gens[i].inverse);
      inv[a] = b;
      inv[b] = a;
    }
    for (auto x : inv) symmetric = symmetric && x != Letter(-1);
    alphabet_ = symmetric ? Alphabet(names, inv) : Alphabet(names);
  }

  SyllableWord image_word(const std::vector<ImagePart>& image) const {
    SyllableWord w;
    for (const auto& part : image) {
      if (auto* b = std::get_if<BaseImage>(&part))
        push_syllable(w, BaseSyllable{b->vertex, b->vector});
      else {
        const auto& s = std::get<StableImage>(part);
        push_syllable(w, StableSyllable{*edge_index(s.edge), s.exp});
      }
    }
    return w;
  }

  Presentation presentation_;
  std::size_t ranks_[2] = {0, 0};
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::uint32_t> edge_index_;
  Lattice amalgam_h_, amalgam_k_;
  Alphabet alphabet_;
  std::vector<SyllableWord> expansions_;
  std::vector<std::pair<std::size_t, bool>> origins_;
};

}  // namespace hnnlab
