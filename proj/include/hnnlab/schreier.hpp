#pragma once

// Random walks on the Schreier graph of G with respect to a vertex group P,
// whose vertices are the right cosets Pg named by the normal form tail of g.

#include "hnnlab/presentation.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hnnlab {

/// Canonical name of a coset Pg: the normal form of g with x0 discarded.
struct CosetId {
  std::vector<TailLink> tail;
  friend bool operator==(const CosetId&, const CosetId&) = default;
  bool is_origin() const { return tail.empty(); }
};

struct CosetIdHash {
  std::size_t operator()(const CosetId& c) const { return hash_value(c.tail); }
};

inline void check_subgroup(const Group& g, Vertex subgroup) {
  if (g.is_hnn() && subgroup != Vertex::H)
    throw std::invalid_argument("HNN extensions have a single vertex group H");
}

inline CosetId coset_of(const Group& g, Vertex subgroup, const SyllableWord& w) {
  check_subgroup(g, subgroup);
  NormalForm nf = normal_form(g, w);
  CosetId c{std::move(nf.tail)};
  if (g.is_amalgam() && nf.head.vertex != subgroup) {
    BigVector r = g.edge_lattice(nf.head.vertex).canonical(nf.head.value);
    if (!is_zero(r)) c.tail.insert(c.tail.begin(), TailLink{std::nullopt, {nf.head.vertex, std::move(r)}});
  }
  return c;
}

inline CosetId coset_of(const Group& g, Vertex subgroup, const Word& w) {
  return coset_of(g, subgroup, to_syllables(g, w));
}

namespace detail {

/// Adds y to the base of link i of an HNN tail (i < 0: the discarded head),
/// restoring the normal form leftwards.
inline void hnn_absorb(const Group& g, std::vector<TailLink>& tail, std::ptrdiff_t i, BigVector y) {
  while (i >= 0) {
    auto& link = tail[static_cast<std::size_t>(i)];
    const StableSyllable s = *link.stable;
    const auto& e = g.edge(s.edge);
    BigVector carry;
    link.base.value += y;
    auto split = e.lattice(s.exp).split(link.base.value);
    link.base.value = std::move(split.residue);
    if (!is_zero(split.coefficients)) carry = e.lattice(-s.exp).basis() * split.coefficients;
    const std::size_t next = static_cast<std::size_t>(i) + 1;
    if (is_zero(link.base.value) && next < tail.size() && tail[next].stable->edge == s.edge &&
        tail[next].stable->exp == -s.exp) {
      // t^s (M_s q) t^-s = M_-s q, so links i and i+1 collapse into link i-1.
      BigVector merged = carry.empty() ? zero_vector(g.rank(Vertex::H)) : std::move(carry);
      merged += tail[next].base.value;
      tail.erase(tail.begin() + i, tail.begin() + i + 2);
      y = std::move(merged);
      --i;
      continue;
    }
    if (carry.empty()) return;
    y = std::move(carry);
    --i;
  }
}

inline void coset_mul_hnn(const Group& g, std::vector<TailLink>& tail, const Syllable& s) {
  if (const auto* b = as_base(s)) {
    if (!tail.empty()) hnn_absorb(g, tail, static_cast<std::ptrdiff_t>(tail.size()) - 1, b->value);
    return;
  }
  const auto& st = std::get<StableSyllable>(s);
  if (!tail.empty() && is_zero(tail.back().base.value) && tail.back().stable->edge == st.edge &&
      tail.back().stable->exp == -st.exp) {
    tail.pop_back();
    return;
  }
  tail.push_back({st, {Vertex::H, zero_vector(g.rank(Vertex::H))}});
}

inline void coset_mul_amalgam(const Group& g, Vertex subgroup, std::vector<TailLink>& tail, const BaseSyllable& y) {
  // A is central in G, so edge-group parts commute into P and vanish.
  const Vertex last = tail.empty() ? subgroup : tail.back().base.vertex;
  if (y.vertex == last) {
    if (tail.empty()) return;
    auto& b = tail.back().base.value;
    b += y.value;
    b = g.edge_lattice(y.vertex).canonical(b);
    if (is_zero(b)) tail.pop_back();
    return;
  }
  BigVector r = g.edge_lattice(y.vertex).canonical(y.value);
  if (!is_zero(r)) tail.push_back({std::nullopt, {y.vertex, std::move(r)}});
}

}  // namespace detail

/// Right multiplication of the coset by one syllable, in place.
inline void coset_multiply(const Group& g, Vertex subgroup, CosetId& c, const Syllable& s) {
  if (g.is_hnn())
    detail::coset_mul_hnn(g, c.tail, s);
  else
    detail::coset_mul_amalgam(g, subgroup, c.tail, std::get<BaseSyllable>(s));
}

/// The coset reached from c along the edge labelled by a letter.
inline CosetId coset_step(const Group& g, Vertex subgroup, CosetId c, Letter a) {
  check_subgroup(g, subgroup);
  if (a >= g.alphabet().size()) throw std::invalid_argument("coset_step: unknown letter");
  for (const auto& s : g.expansion(a)) coset_multiply(g, subgroup, c, s);
  return c;
}

enum class WalkMode { plain, no_backtrack };

struct WalkRow {
  std::size_t n = 0;
  double p = 0;
  double ci_lo = 0, ci_hi = 0;
  std::uint64_t trials = 0;          // 0 for exact rows
  std::optional<BigInt> numerator;   // exact rational rows: p = numerator / denominator
  std::optional<BigInt> denominator;
};

struct WalkReport {
  std::string mode;  // mc, mc-nb, exact, exact-nb
  std::vector<WalkRow> rows;
};

inline constexpr double kWilsonZ = 1.959963984540054;  // two-sided 95%

/// Wilson score interval for k successes in n trials.
inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = kWilsonZ) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn, z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline void check_walk_mode(const Group& g, WalkMode mode) {
  if (mode == WalkMode::no_backtrack && !g.alphabet().symmetric())
    throw std::invalid_argument("no-backtrack walks need a symmetric alphabet");
  if (g.alphabet().size() == 0) throw std::invalid_argument("walks need a nonempty alphabet");
  if (mode == WalkMode::no_backtrack && g.alphabet().size() < 2)
    throw std::invalid_argument("no-backtrack walks need at least two letters");
}

/// Monte Carlo return probabilities p^(n) (or q^(n) without backtracking)
/// to the origin coset P. Trial i draws from stream (seed, i).
inline WalkReport walk_mc(const Group& g, Vertex subgroup, std::size_t n_max, std::uint64_t trials,
                          std::uint64_t seed, WalkMode mode = WalkMode::plain) {
  check_subgroup(g, subgroup);
  check_walk_mode(g, mode);
  const Alphabet& alpha = g.alphabet();
  const std::size_t d = alpha.size();
  std::vector<std::uint64_t> returns(n_max + 1, 0);
  CosetId c;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng = derive_stream(seed, trial);
    c.tail.clear();
    Letter prev = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      Letter a;
      if (mode == WalkMode::no_backtrack && n > 1) {
        const Letter banned = alpha.inverse(prev);
        a = static_cast<Letter>(uniform_below(rng, d - 1));
        if (a >= banned) ++a;
      } else {
        a = static_cast<Letter>(uniform_below(rng, d));
      }
      prev = a;
      for (const auto& s : g.expansion(a)) coset_multiply(g, subgroup, c, s);
      returns[n] += c.is_origin();
    }
  }
  WalkReport report{mode == WalkMode::plain ? "mc" : "mc-nb", {}};
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::uint64_t k = n == 0 ? trials : returns[n];
    auto [lo, hi] = wilson_interval(k, trials);
    report.rows.push_back({n, trials ? static_cast<double>(k) / static_cast<double>(trials) : 0.0, lo, hi, trials,
                           std::nullopt, std::nullopt});
  }
  return report;
}

class resource_cap_exceeded : public std::runtime_error {
 public:
  resource_cap_exceeded(std::size_t step, std::size_t states)
      : std::runtime_error("state count " + std::to_string(states) + " exceeds the memory cap at step " +
                           std::to_string(step)),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

inline constexpr std::size_t kDefaultMemoryCap = 10'000'000;

struct ExactWalkOptions {
  WalkMode mode = WalkMode::plain;
  bool rational = false;
  std::size_t memory_cap = kDefaultMemoryCap;
};

namespace detail {

/// Walk state: coset plus, without backtracking, the last letter (alphabet
/// size when there is none yet).
struct WalkState {
  CosetId coset;
  Letter last;
  friend bool operator==(const WalkState&, const WalkState&) = default;
};

struct WalkStateHash {
  std::size_t operator()(const WalkState& s) const { return hash_combine(CosetIdHash{}(s.coset), s.last); }
};

template <class Weight>
WalkReport walk_exact_impl(const Group& g, Vertex subgroup, std::size_t n_max, const ExactWalkOptions& opt) {
  const Alphabet& alpha = g.alphabet();
  const std::size_t d = alpha.size();
  const bool nb = opt.mode == WalkMode::no_backtrack;
  // Weights are path counts in rational mode and probabilities otherwise.
  std::unordered_map<WalkState, Weight, WalkStateHash> dist{{WalkState{{}, static_cast<Letter>(d)}, Weight(1)}};
  WalkReport report{nb ? "exact-nb" : "exact", {}};
  BigInt paths = 1;
  auto emit = [&](std::size_t n) {
    Weight home = 0;
    for (const auto& [s, w] : dist)
      if (s.coset.is_origin()) home += w;
    WalkRow row{n, 0, 0, 0, 0, std::nullopt, std::nullopt};
    if constexpr (std::is_same_v<Weight, BigInt>) {
      BigInt q = gcd(home, paths);
      row.numerator = home / q;
      row.denominator = paths / q;
      row.p = static_cast<double>(boost::multiprecision::cpp_rational(home, paths));
    } else {
      row.p = home;
    }
    row.ci_lo = row.ci_hi = row.p;
    report.rows.push_back(std::move(row));
  };
  emit(0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::unordered_map<WalkState, Weight, WalkStateHash> next;
    next.reserve(dist.size() * 2);
    const std::size_t choices = nb && n > 1 ? d - 1 : d;
    for (const auto& [s, w] : dist) {
      for (Letter a = 0; a < d; ++a) {
        if (nb && s.last < d && a == alpha.inverse(s.last)) continue;
        WalkState t{s.coset, nb ? a : static_cast<Letter>(d)};
        for (const auto& syl : g.expansion(a)) coset_multiply(g, subgroup, t.coset, syl);
        if constexpr (std::is_same_v<Weight, BigInt>)
          next[std::move(t)] += w;
        else
          next[std::move(t)] += w / static_cast<double>(choices);
      }
      if (next.size() > opt.memory_cap) throw resource_cap_exceeded(n, next.size());
    }
    paths *= choices;
    dist = std::move(next);
    emit(n);
  }
  return report;
}

}  // namespace detail

/// Exact distribution of the walk over cosets by step-wise convolution.
inline WalkReport walk_exact(const Group& g, Vertex subgroup, std::size_t n_max, const ExactWalkOptions& opt = {}) {
  check_subgroup(g, subgroup);
  check_walk_mode(g, opt.mode);
  return opt.rational ? detail::walk_exact_impl<BigInt>(g, subgroup, n_max, opt)
                      : detail::walk_exact_impl<double>(g, subgroup, n_max, opt);
}

enum class GenericDomain { sigma_star, delta };

struct GenericityRow {
  std::size_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t elliptic = 0;
  double fraction() const { return samples ? static_cast<double>(elliptic) / static_cast<double>(samples) : 0.0; }
};

struct GenericityReport {
  GenericDomain domain = GenericDomain::sigma_star;
  std::vector<GenericityRow> rows;
};

inline const char* to_string(GenericDomain d) { return d == GenericDomain::sigma_star ? "all" : "cyc-reduced"; }

/// Fraction of elliptic elements among uniform words of each length, drawn
/// from all words or from cyclically reduced words. Sample i of length n
/// draws from stream (seed, n, i).
inline GenericityReport genericity_experiment(const Group& g, const std::vector<std::size_t>& lengths,
                                              std::uint64_t samples, std::uint64_t seed, GenericDomain domain) {
  const Alphabet& alpha = g.alphabet();
  if (domain == GenericDomain::delta && (!alpha.symmetric() || alpha.size() < 4))
    throw std::invalid_argument("cyclically reduced sampling needs a symmetric alphabet with at least 4 letters");
  const SampleMode mode = domain == GenericDomain::sigma_star ? SampleMode::all : SampleMode::cyc_reduced;
  GenericityReport report{domain, {}};
  for (std::size_t n : lengths) {
    GenericityRow row{n, samples, 0};
    for (std::uint64_t i = 0; i < samples; ++i) {
      Rng rng = derive_stream(seed, n, i);
      const Word w = sample_word(alpha, n, mode, rng);
      row.elliptic += classify_element(g, w).kind == ElementKind::elliptic;
    }
    report.rows.push_back(row);
  }
  return report;
}

struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares: need two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("least_squares: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.residuals.push_back(y[i] - (f.slope * x[i] + f.intercept));
    ss_res += f.residuals.back() * f.residuals.back();
  }
  f.r2 = syy == 0 ? 1.0 : 1 - ss_res / syy;
  return f;
}

struct DecayFitOptions {
  std::size_t n_min = 1;
  std::size_t n_max = static_cast<std::size_t>(-1);
  bool even_only = false;
};

struct DecayFit {
  double exp_rate = 0;       // slope of log2 p against n
  double poly_exponent = 0;  // slope of ln p against ln n
  LineFit exp_fit, poly_fit;
  std::size_t points = 0;
};

/// Fits exponential and polynomial decay laws to the positive entries of a
/// walk report within the window.
inline DecayFit decay_fit(const std::vector<std::pair<std::size_t, double>>& series, const DecayFitOptions& opt = {}) {
  std::vector<double> n, lg2, ln_n, ln_p;
  for (const auto& [k, p] : series) {
    if (k < opt.n_min || k > opt.n_max || k == 0 || !(p > 0)) continue;
    if (opt.even_only && k % 2) continue;
    n.push_back(static_cast<double>(k));
    lg2.push_back(std::log2(p));
    ln_n.push_back(std::log(static_cast<double>(k)));
    ln_p.push_back(std::log(p));
  }
  if (n.size() < 5) throw std::invalid_argument("decay_fit: fewer than 5 positive entries");
  DecayFit f;
  f.exp_fit = least_squares(n, lg2);
  f.poly_fit = least_squares(ln_n, ln_p);
  f.exp_rate = f.exp_fit.slope;
  f.poly_exponent = f.poly_fit.slope;
  f.points = n.size();
  return f;
}

inline DecayFit decay_fit(const WalkReport& report, const DecayFitOptions& opt = {}) {
  std::vector<std::pair<std::size_t, double>> series;
  for (const auto& r : report.rows) series.emplace_back(r.n, r.p);
  return decay_fit(series, opt);
}

}  // namespace hnnlab
