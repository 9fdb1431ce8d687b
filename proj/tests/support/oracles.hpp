#pragma once

// Slow reference computations that share no code paths with the library
// routines they check.

#include "hnnlab/hnnlab.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using hnnlab::BigInt;
using hnnlab::BigMatrix;
using hnnlab::BigVector;

/// Determinant by fraction-free Bareiss elimination.
inline BigInt determinant(BigMatrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant: not square");
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return 0;
      m.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Invariant factors d_k = D_k / D_{k-1}, D_k the gcd of all k x k minors.
inline std::vector<BigInt> invariant_factors(const BigMatrix& a) {
  std::vector<BigInt> out;
  BigInt prev = 1;
  for (std::size_t k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
    BigInt g = 0;
    subsets(a.rows(), k, [&](const std::vector<std::size_t>& rows) {
      subsets(a.cols(), k, [&](const std::vector<std::size_t>& cols) {
        BigMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor(i, j) = a(rows[i], cols[j]);
        g = gcd(g, abs(determinant(minor)));
      });
    });
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

/// Some x with entries in [-box, box] and a x = b, by exhaustive search.
inline std::optional<BigVector> solve_in_box(const BigMatrix& a, const BigVector& b, int box) {
  BigVector x(a.cols(), BigInt(-box));
  for (;;) {
    if (a * x == b) return x;
    std::size_t i = 0;
    while (i < x.size() && x[i] == box) x[i++] = -box;
    if (i == x.size()) return std::nullopt;
    ++x[i];
  }
}

/// Rational solvability of a x = b via rank comparison of the augmented
/// matrix, computed with Bareiss-style minors.
inline std::size_t rank_by_minors(const BigMatrix& a) {
  for (std::size_t k = std::min(a.rows(), a.cols()); k > 0; --k) {
    bool nonzero = false;
    subsets(a.rows(), k, [&](const std::vector<std::size_t>& rows) {
      if (nonzero) return;
      subsets(a.cols(), k, [&](const std::vector<std::size_t>& cols) {
        if (nonzero) return;
        BigMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor(i, j) = a(rows[i], cols[j]);
        nonzero = determinant(minor) != 0;
      });
    });
    if (nonzero) return k;
  }
  return 0;
}

/// Number of words of length len over {a, a', t, t'} whose {t, t'}
/// projection is a Dyck word with t opening, by enumeration of all 4^len
/// words. Letters: 0 = a, 1 = a', 2 = t, 3 = t'.
inline std::uint64_t dyck_projection_count(std::size_t len) {
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t(1) << (2 * len);
  for (std::uint64_t code = 0; code < total; ++code) {
    int depth = 0;
    bool ok = true;
    std::uint64_t c = code;
    for (std::size_t i = 0; i < len && ok; ++i, c >>= 2) {
      const unsigned letter = c & 3u;
      if (letter == 2) ++depth;
      if (letter == 3 && --depth < 0) ok = false;
    }
    count += ok && depth == 0;
  }
  return count;
}

/// sum_m binom(len, 2m) Cat(m) 2^(len - 2m).
inline BigInt dyck_projection_formula(std::size_t len) {
  auto binom = [](std::size_t n, std::size_t k) {
    BigInt r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  BigInt total = 0;
  for (std::size_t m = 0; 2 * m <= len; ++m) {
    BigInt cat = binom(2 * m, m) / (m + 1);
    total += binom(len, 2 * m) * cat * (BigInt(1) << (len - 2 * m));
  }
  return total;
}

/// Britton reduction applying the available pinches in random order.
inline hnnlab::SyllableWord random_order_reduce(const hnnlab::Group& g, hnnlab::SyllableWord w, hnnlab::Rng& rng) {
  for (;;) {
    auto sites = hnnlab::pinch_sites(g, w);
    if (sites.empty()) return w;
    w = hnnlab::apply_pinch(g, w, sites[hnnlab::uniform_below(rng, sites.size())]);
  }
}

/// Fewest stable letters reachable by any sequence of pinches.
inline std::size_t min_stable_count(const hnnlab::Group& g, const hnnlab::SyllableWord& w) {
  std::size_t best = hnnlab::stable_count(w);
  for (std::size_t site : hnnlab::pinch_sites(g, w)) best = std::min(best, min_stable_count(g, hnnlab::apply_pinch(g, w, site)));
  return best;
}

/// Every word of length n over the alphabet.
inline void for_each_word(std::size_t d, std::size_t n, const std::function<void(const hnnlab::Word&)>& f) {
  hnnlab::Word w(n, 0);
  for (;;) {
    f(w);
    std::size_t i = 0;
    while (i < n && w[i] == d - 1) w[i++] = 0;
    if (i == n) return;
    ++w[i];
  }
}

/// Every reduced word of length <= n.
inline void for_each_reduced_word(const hnnlab::Alphabet& alpha, std::size_t n,
                                  const std::function<void(const hnnlab::Word&)>& f) {
  hnnlab::Word w;
  std::function<void()> rec = [&] {
    f(w);
    if (w.size() == n) return;
    for (hnnlab::Letter a = 0; a < alpha.size(); ++a) {
      if (!w.empty() && w.back() == alpha.inverse(a)) continue;
      w.push_back(a);
      rec();
      w.pop_back();
    }
  };
  rec();
}

/// Transition probabilities of the walk on cosets computed through full
/// normal forms of representative words instead of coset stepping.
inline std::vector<double> return_probabilities_by_words(const hnnlab::Group& g, hnnlab::Vertex subgroup,
                                                         std::size_t n_max) {
  std::vector<double> out(n_max + 1, 0.0);
  const std::size_t d = g.alphabet().size();
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::uint64_t hits = 0, total = 0;
    for_each_word(d, n, [&](const hnnlab::Word& w) {
      ++total;
      hits += hnnlab::coset_of(g, subgroup, w).is_origin();
    });
    out[n] = static_cast<double>(hits) / static_cast<double>(total);
  }
  return out;
}

}  // namespace oracle
