#pragma once

// Conjugacy in HNN extensions and amalgams over free abelian vertex groups.
// Hyperbolic pairs are always decided (Collins' lemma plus one linear
// Diophantine system per rotation); elliptic pairs are decided by equality,
// phi-chains and bounded orbit search, and may be refused.

#include "hnnlab/presentation.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace hnnlab {

struct Verdict {
  enum class Kind { yes, no, refused };
  Kind kind = Kind::no;
  SyllableWord witness;  // yes: witness * u * witness^-1 == v
  std::string reason;

  static Verdict yes(SyllableWord w) { return {Kind::yes, std::move(w), {}}; }
  static Verdict no(std::string why) { return {Kind::no, {}, std::move(why)}; }
  static Verdict refused(std::string why) { return {Kind::refused, {}, std::move(why)}; }

  bool is_yes() const { return kind == Kind::yes; }
  bool is_no() const { return kind == Kind::no; }
  bool is_refused() const { return kind == Kind::refused; }
};

inline const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::yes: return "YES";
    case Verdict::Kind::no: return "NO";
    case Verdict::Kind::refused: return "REFUSED";
  }
  return "?";
}

struct ConjugacyOptions {
  std::size_t orbit_bound = 10000;
};

/// Whether z u z^-1 == v in G.
inline bool is_conjugator(const Group& g, const SyllableWord& z, const SyllableWord& u, const SyllableWord& v) {
  return word_problem(g, concat(concat(z, u), invert(z), invert(v)));
}

/// One t-block t^eps x of a cyclically reduced HNN word.
struct StableBlock {
  StableSyllable stable;
  BigVector base;
};

/// Splits a word that starts with a stable letter into t-blocks.
inline std::vector<StableBlock> stable_blocks(const Group& g, const SyllableWord& w) {
  std::vector<StableBlock> out;
  for (const auto& s : w) {
    if (const auto* st = as_stable(s)) {
      out.push_back({*st, zero_vector(g.rank(Vertex::H))});
    } else {
      if (out.empty()) throw std::invalid_argument("stable_blocks: word must start with a stable letter");
      out.back().base += as_base(s)->value;
    }
  }
  return out;
}

/// M_{e_i} x_i - M_{-e_{i+1}} x_{i+1} + g_i = h_i for i = 1..k, indices mod k.
struct CollinsSystem {
  struct Position {
    std::uint32_t edge;
    int eps;
    BigVector g, h;
  };
  std::vector<Position> positions;
  std::vector<std::size_t> offsets;  // first column of x_i
  BigMatrix matrix;
  BigVector rhs;

  std::size_t k() const { return positions.size(); }
};

/// nullopt when the stable-letter sequences of u and v differ.
inline std::optional<CollinsSystem> build_collins_system(const Group& g, const std::vector<StableBlock>& u,
                                                         const std::vector<StableBlock>& v) {
  if (u.size() != v.size() || u.empty()) return std::nullopt;
  const std::size_t k = u.size(), n = g.rank(Vertex::H);
  CollinsSystem sys;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(u[i].stable == v[i].stable)) return std::nullopt;
    sys.positions.push_back({u[i].stable.edge, u[i].stable.exp, u[i].base, v[i].base});
    sys.offsets.push_back(cols);
    cols += g.edge(u[i].stable.edge).plus.basis().cols();
  }
  sys.matrix = BigMatrix(k * n, cols);
  sys.rhs = zero_vector(k * n);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = sys.positions[i];
    const std::size_t j = (i + 1) % k;
    const auto& q = sys.positions[j];
    const BigMatrix& left = g.edge(p.edge).lattice(p.eps).basis();
    const BigMatrix& right = g.edge(q.edge).lattice(-q.eps).basis();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < left.cols(); ++c) sys.matrix(i * n + r, sys.offsets[i] + c) += left(r, c);
      for (std::size_t c = 0; c < right.cols(); ++c) sys.matrix(i * n + r, sys.offsets[j] + c) -= right(r, c);
      sys.rhs[i * n + r] = p.h[r] - p.g[r];
    }
  }
  return sys;
}

namespace detail {

inline SyllableWord blocks_prefix(const std::vector<StableBlock>& b, std::size_t r) {
  SyllableWord w;
  for (std::size_t i = 0; i < r; ++i) {
    w.push_back(b[i].stable);
    push_syllable(w, BaseSyllable{Vertex::H, b[i].base});
  }
  return w;
}

/// Finishes a witness z' between the cyclic cores and verifies it.
inline Verdict lift_witness(const Group& g, const ElementClass& cu, const ElementClass& cv, const SyllableWord& z,
                            const SyllableWord& u, const SyllableWord& v) {
  SyllableWord witness = britton_reduce(g, concat(cv.reduction.conjugator, z, invert(cu.reduction.conjugator)));
  if (!is_conjugator(g, witness, u, v)) throw std::logic_error("conjugacy witness failed verification");
  return Verdict::yes(std::move(witness));
}

inline BigVector base_value(const Group& g, const SyllableWord& core) {
  BigVector x = zero_vector(g.rank(core.empty() ? Vertex::H : as_base(core.front())->vertex));
  for (const auto& s : core) x += as_base(s)->value;
  return x;
}

}  // namespace detail

/// Both inputs hyperbolic. Never refuses.
inline Verdict conjugate_hyperbolic(const Group& g, const SyllableWord& u, const SyllableWord& v) {
  const ElementClass cu = classify_element(g, u), cv = classify_element(g, v);
  if (cu.kind != ElementKind::hyperbolic || cv.kind != ElementKind::hyperbolic)
    throw std::invalid_argument("conjugate_hyperbolic: input is not hyperbolic");
  const SyllableWord& a = cu.reduction.core;
  const SyllableWord& b = cv.reduction.core;

  if (g.is_amalgam()) {
    // A is central, so conjugation by an edge element fixes every core.
    if (a.size() != b.size()) return Verdict::no("syllable length differs");
    const NormalForm target = normal_form(g, a);
    for (std::size_t r = 0; r < b.size(); ++r) {
      SyllableWord rotated(b.begin() + r, b.end());
      rotated.insert(rotated.end(), b.begin(), b.begin() + r);
      if (normal_form(g, rotated) == target)
        return detail::lift_witness(g, cu, cv, SyllableWord(b.begin(), b.begin() + r), u, v);
    }
    return Verdict::no("no rotation matches");
  }

  const auto ub = stable_blocks(g, a), vb = stable_blocks(g, b);
  if (ub.size() != vb.size()) return Verdict::no("stable letter count differs");
  bool pattern = false;
  for (std::size_t r = 0; r < vb.size(); ++r) {
    std::vector<StableBlock> rotated(vb.begin() + r, vb.end());
    rotated.insert(rotated.end(), vb.begin(), vb.begin() + r);
    auto sys = build_collins_system(g, ub, rotated);
    if (!sys) continue;
    pattern = true;
    auto x = solve(sys->matrix, sys->rhs);
    if (!x) continue;
    const auto& p0 = sys->positions.front();
    const BigMatrix& m = g.edge(p0.edge).lattice(-p0.eps).basis();
    BigVector x1(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(m.cols()));
    SyllableWord z = detail::blocks_prefix(vb, r);
    push_syllable(z, BaseSyllable{Vertex::H, m * x1});
    return detail::lift_witness(g, cu, cv, z, u, v);
  }
  return Verdict::no(pattern ? "collins system unsolvable" : "stable letter pattern differs");
}

struct OrbitResult {
  enum class Kind { found, not_in_orbit, inconclusive };
  Kind kind = Kind::inconclusive;
  std::size_t power = 0;  // found: n^power h == g
};

/// Decides whether n^i h = g for some 0 <= i <= bound, certifying absence by
/// cycle detection, growth in dimension one, or the depth of g in the
/// lattices n^i Z^d.
inline OrbitResult orbit_search(const BigMatrix& n, const BigVector& h, const BigVector& g, std::size_t bound) {
  if (n.rows() != n.cols() || h.size() != n.rows() || g.size() != n.rows())
    throw std::invalid_argument("orbit_search: dimension mismatch");
  using K = OrbitResult::Kind;

  // Depth of g: the largest j with g in n^j Z^d, when finite and small.
  std::optional<std::size_t> depth;
  if (n.rows() > 0 && rank(n) == n.rows()) {
    const Lattice image(n);
    BigVector cur = g;
    for (std::size_t j = 0; j <= bound; ++j) {
      auto y = image.preimage(cur);
      if (!y) {
        depth = j;
        break;
      }
      if (*y == g) break;  // g is periodic under n^-1
      cur = std::move(*y);
    }
  }

  std::unordered_set<BigVector, BigVectorHash> seen;
  BigVector cur = h;
  for (std::size_t i = 0; i <= bound; ++i) {
    if (cur == g) return {K::found, i};
    if (depth && i >= *depth) return {K::not_in_orbit, 0};
    if (!seen.insert(cur).second) return {K::not_in_orbit, 0};
    BigVector next = n * cur;
    if (n.rows() == 1 && abs(next[0]) > abs(cur[0]) && abs(cur[0]) > abs(g[0])) return {K::not_in_orbit, 0};
    cur = std::move(next);
  }
  return {K::inconclusive, 0};
}

namespace detail {

/// phi_e(x) (dir = +1) or phi_e^-1(x) (dir = -1), when defined. Conjugating
/// by t_e^dir realizes the step.
inline std::optional<BigVector> phi_step(const Group& g, std::uint32_t edge, int dir, const BigVector& x) {
  return pinch_image(g, edge, dir, x);
}

/// Integer matrix of phi (dir = +1) or phi^-1 (dir = -1) on all of H, for
/// an edge whose domain has index one.
inline BigMatrix full_phi_matrix(const Group& g, std::uint32_t edge, int dir) {
  const auto& e = g.edge(edge);
  const BigMatrix& from = e.lattice(dir).basis();
  const BigMatrix& to = e.lattice(-dir).basis();
  const std::size_t n = from.rows();
  std::vector<BigVector> cols;
  for (std::size_t j = 0; j < n; ++j) {
    BigVector unit = zero_vector(n);
    unit[j] = 1;
    cols.push_back(to * *solve(from, unit));
  }
  return BigMatrix::from_columns(cols, n);
}

inline SyllableWord stable_power(std::uint32_t edge, int exp, std::size_t i) {
  return SyllableWord(i, StableSyllable{edge, exp});
}

enum class ChainEnd { found, certified, inconclusive };

/// Follows phi^dir from start while defined, looking for target.
inline ChainEnd walk_chain(const Group& g, std::uint32_t edge, int dir, const BigVector& start,
                           const BigVector& target, std::size_t bound, std::size_t& steps, bool& cycle) {
  BigVector cur = start;
  for (steps = 0; steps <= bound; ++steps) {
    if (cur == target) return ChainEnd::found;
    auto next = phi_step(g, edge, dir, cur);
    if (!next) return ChainEnd::certified;
    if (*next == start) {
      cycle = true;
      return ChainEnd::certified;
    }
    if (cur.size() == 1 && abs((*next)[0]) > abs(cur[0]) && abs(cur[0]) > abs(target[0]))
      return ChainEnd::certified;
    cur = std::move(*next);
  }
  return ChainEnd::inconclusive;
}

/// Breadth-first search over all phi_e^{+-1} moves from both ends.
inline Verdict chain_search(const Group& g, const BigVector& x, const BigVector& y, std::size_t bound,
                            SyllableWord& z) {
  struct Seen {
    BigVector parent;
    StableSyllable move;  // conjugating by move maps parent to this node
    bool root;
  };
  using Map = std::unordered_map<BigVector, Seen, BigVectorHash>;
  Map side[2];
  std::vector<BigVector> frontier[2] = {{x}, {y}};
  side[0].emplace(x, Seen{{}, {}, true});
  side[1].emplace(y, Seen{{}, {}, true});
  auto path_to_root = [&](int s, BigVector node) {
    SyllableWord w;  // w * root * w^-1 == node
    for (;;) {
      const Seen& e = side[s].at(node);
      if (e.root) break;
      w.push_back(e.move);
      node = e.parent;
    }
    return w;
  };
  if (x == y) return Verdict::yes({});
  while (!frontier[0].empty() && !frontier[1].empty()) {
    if (side[0].size() + side[1].size() > bound) return Verdict::refused("chain search bound exhausted");
    const int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    std::vector<BigVector> next;
    for (const auto& node : frontier[s]) {
      for (std::uint32_t e = 0; e < g.edge_count(); ++e)
        for (int dir : {1, -1}) {
          auto to = phi_step(g, e, dir, node);
          if (!to || side[s].count(*to)) continue;
          side[s].emplace(*to, Seen{node, {e, dir}, false});
          if (side[1 - s].count(*to)) {
            SyllableWord a = path_to_root(0, *to), b = path_to_root(1, *to);
            z = concat(invert(b), a);  // x -> meeting point -> y
            return Verdict::yes({});
          }
          next.push_back(*to);
        }
    }
    frontier[s] = std::move(next);
  }
  return Verdict::no("phi-chain component exhausted");
}

}  // namespace detail

/// Both inputs elliptic. May refuse when a phi-orbit cannot be settled
/// within options.orbit_bound steps.
inline Verdict conjugate_elliptic(const Group& g, const SyllableWord& u, const SyllableWord& v,
                                  const ConjugacyOptions& options = {}) {
  const ElementClass cu = classify_element(g, u), cv = classify_element(g, v);
  if (cu.kind != ElementKind::elliptic || cv.kind != ElementKind::elliptic)
    throw std::invalid_argument("conjugate_elliptic: input is not elliptic");

  if (g.is_amalgam()) {
    if (normal_form(g, cu.reduction.core) == normal_form(g, cv.reduction.core))
      return detail::lift_witness(g, cu, cv, {}, u, v);
    return Verdict::no("distinct vertex elements");
  }

  const BigVector x = detail::base_value(g, cu.reduction.core);
  const BigVector y = detail::base_value(g, cv.reduction.core);
  if (x == y) return detail::lift_witness(g, cu, cv, {}, u, v);

  // Abelianization: conjugates agree modulo the span of (m_plus - m_minus).
  {
    std::vector<BigVector> cols;
    for (const auto& e : g.presentation().hnn().edges)
      for (std::size_t c = 0; c < e.m_plus.cols(); ++c) cols.push_back(e.m_plus.column(c) - e.m_minus.column(c));
    if (!solve(BigMatrix::from_columns(cols, x.size()), y - x)) return Verdict::no("abelianization differs");
  }

  if (g.edge_count() > 1) {
    SyllableWord z;
    Verdict r = detail::chain_search(g, x, y, options.orbit_bound, z);
    return r.is_yes() ? detail::lift_witness(g, cu, cv, z, u, v) : r;
  }

  const auto& raw = g.presentation().hnn().edges.front();
  const bool a_full = detail::index_one(raw.m_plus), b_full = detail::index_one(raw.m_minus);
  if (a_full || b_full) {
    // phi (or phi^-1) is an injective endomorphism of H; the component of x
    // is its two-sided orbit.
    const int dir = a_full ? 1 : -1;
    const BigMatrix n = detail::full_phi_matrix(g, 0, dir);
    const OrbitResult fwd = orbit_search(n, x, y, options.orbit_bound);
    if (fwd.kind == OrbitResult::Kind::found)
      return detail::lift_witness(g, cu, cv, detail::stable_power(0, dir, fwd.power), u, v);
    const OrbitResult bwd = orbit_search(n, y, x, options.orbit_bound);
    if (bwd.kind == OrbitResult::Kind::found)
      return detail::lift_witness(g, cu, cv, detail::stable_power(0, -dir, bwd.power), u, v);
    if (fwd.kind == OrbitResult::Kind::not_in_orbit && bwd.kind == OrbitResult::Kind::not_in_orbit)
      return Verdict::no("not in phi-orbit");
    return Verdict::refused("orbit bound exhausted");
  }

  // Neither side is all of H: the component of x is a path (or cycle)
  // following phi forward while in A and backward while in B.
  bool cycle = false, inconclusive = false;
  for (int dir : {1, -1}) {
    std::size_t steps = 0;
    switch (detail::walk_chain(g, 0, dir, x, y, options.orbit_bound, steps, cycle)) {
      case detail::ChainEnd::found:
        return detail::lift_witness(g, cu, cv, detail::stable_power(0, dir, steps), u, v);
      case detail::ChainEnd::inconclusive: inconclusive = true; break;
      case detail::ChainEnd::certified: break;
    }
    if (cycle) return Verdict::no("phi-chain is a cycle");
  }
  if (inconclusive) return Verdict::refused("chain bound exhausted");
  return Verdict::no("phi-chain exhausted");
}

/// Decides conjugacy of u and v in G; Yes witnesses are verified.
inline Verdict conjugate(const Group& g, const SyllableWord& u, const SyllableWord& v,
                         const ConjugacyOptions& options = {}) {
  const bool eu = classify_element(g, u).kind == ElementKind::elliptic;
  const bool ev = classify_element(g, v).kind == ElementKind::elliptic;
  if (eu != ev) return Verdict::no("elliptic vs hyperbolic");
  return eu ? conjugate_elliptic(g, u, v, options) : conjugate_hyperbolic(g, u, v);
}

inline Verdict conjugate(const Group& g, const Word& u, const Word& v, const ConjugacyOptions& options = {}) {
  return conjugate(g, to_syllables(g, u), to_syllables(g, v), options);
}

/// Normal forms of y w y^-1 over all reduced letter words y with |y| <= radius,
/// each with the first y found.
class ConjugationBall {
 public:
  ConjugationBall(const Group& g, const SyllableWord& w, std::size_t radius) {
    const Alphabet& alpha = g.alphabet();
    Word y;
    // Conjugating by one more letter on the left: a (y w y^-1) a^-1.
    std::vector<SyllableWord> stack{britton_reduce(g, w)};
    auto visit = [&](auto&& self) -> void {
      members_.try_emplace(normal_form(g, stack.back()), y);
      if (y.size() == radius) return;
      for (Letter a = 0; a < alpha.size(); ++a) {
        if (alpha.symmetric() && !y.empty() && y.front() == alpha.inverse(a)) continue;
        const SyllableWord& img = g.expansion(a);
        stack.push_back(britton_reduce(g, concat(img, stack.back(), invert(img))));
        y.insert(y.begin(), a);
        self(self);
        y.erase(y.begin());
        stack.pop_back();
      }
    };
    visit(visit);
  }

  const Word* find(const NormalForm& nf) const {
    auto it = members_.find(nf);
    return it == members_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return members_.size(); }
  const std::unordered_map<NormalForm, Word, NormalFormHash>& members() const { return members_; }

 private:
  std::unordered_map<NormalForm, Word, NormalFormHash> members_;
};

struct BruteForceResult {
  bool found = false;
  Word witness;  // found: witness * u * witness^-1 == v
};

inline constexpr std::size_t kBruteForceRadiusCap = 16;

/// Direct enumeration of every reduced conjugator word up to radius.
inline BruteForceResult brute_force_conjugate_plain(const Group& g, const SyllableWord& u, const SyllableWord& v,
                                                    std::size_t radius, std::size_t cap = kBruteForceRadiusCap) {
  if (radius > cap) throw std::invalid_argument("brute_force_conjugate: radius above cap");
  const Alphabet& alpha = g.alphabet();
  Word z;
  BruteForceResult out;
  auto visit = [&](auto&& self) -> bool {
    if (is_conjugator(g, to_syllables(g, z), u, v)) {
      out = {true, z};
      return true;
    }
    if (z.size() == radius) return false;
    for (Letter a = 0; a < alpha.size(); ++a) {
      if (alpha.symmetric() && !z.empty() && z.back() == alpha.inverse(a)) continue;
      z.push_back(a);
      if (self(self)) return true;
      z.pop_back();
    }
    return false;
  };
  visit(visit);
  return out;
}

/// Searches conjugators of letter length <= radius by meeting in the
/// middle: z = x y with y u y^-1 == x^-1 v x.
inline BruteForceResult brute_force_conjugate(const Group& g, const SyllableWord& u, const SyllableWord& v,
                                              std::size_t radius, std::size_t cap = kBruteForceRadiusCap) {
  if (radius > cap) throw std::invalid_argument("brute_force_conjugate: radius above cap");
  const Alphabet& alpha = g.alphabet();
  if (!alpha.symmetric()) return brute_force_conjugate_plain(g, u, v, radius, cap);
  const ConjugationBall left(g, u, (radius + 1) / 2);
  const ConjugationBall right(g, v, radius / 2);  // entries are x^-1 with x^-1 v x
  for (const auto& [nf, y] : left.members()) {
    const Word* x_inv = right.find(nf);
    if (!x_inv) continue;
    Word z = invert_word(alpha, *x_inv);
    z.insert(z.end(), y.begin(), y.end());
    return {true, free_reduce(alpha, z)};
  }
  return {};
}

}  // namespace hnnlab
