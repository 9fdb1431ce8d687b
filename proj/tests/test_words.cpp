#include "hnnlab/words.hpp"
#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <map>
#include <set>

using namespace hnnlab;

namespace {

Alphabet four() { return Alphabet({"a", "a'", "b", "b'"}, std::vector<Letter>{1, 0, 3, 2}); }

Word w(const Alphabet& al, const char* text) { return parse_word(al, text); }

/// Index of a word of length n over d letters.
std::size_t code(const Word& x, std::size_t d) {
  std::size_t c = 0;
  for (Letter a : x) c = c * d + a;
  return c;
}

}  // namespace

TEST_CASE("alphabet invariants") {
  CHECK_THROWS(Alphabet({"a", "a"}));
  CHECK_THROWS(Alphabet({"a", "b"}, std::vector<Letter>{0, 1}));     // fixed points
  CHECK_THROWS(Alphabet({"a", "b", "c"}, std::vector<Letter>{1, 2, 0}));  // not an involution
  CHECK_THROWS(Alphabet({"a", "b"}, std::vector<Letter>{1}));
  const Alphabet al = four();
  CHECK(al.symmetric());
  CHECK(al.inverse(al.inverse(2)) == 2);
  CHECK_FALSE(Alphabet({"x", "y"}).symmetric());
}

TEST_CASE("free_reduce examples") {
  const Alphabet al = four();
  CHECK(free_reduce(al, w(al, "a a' b")) == w(al, "b"));
  CHECK(free_reduce(al, {}).empty());
  CHECK(free_reduce(al, w(al, "a b b' a'")).empty());
  CHECK_THROWS_AS(free_reduce(Alphabet({"x"}), {0}), std::invalid_argument);
}

TEST_CASE("cyclic_reduce examples") {
  const Alphabet al = four();
  auto r = cyclic_reduce(al, w(al, "a b a'"));
  CHECK(r.core == w(al, "b"));
  CHECK(r.conjugator == w(al, "a"));
  r = cyclic_reduce(al, w(al, "b"));
  CHECK(r.core == w(al, "b"));
  CHECK(r.conjugator.empty());
  CHECK(cyclic_reduce(al, w(al, "a a'")).core.empty());
}

TEST_CASE("invert_word examples") {
  const Alphabet al = four();
  CHECK(invert_word(al, w(al, "a b")) == w(al, "b' a'"));
  CHECK(invert_word(al, {}).empty());
  CHECK(invert_word(al, w(al, "a")) == w(al, "a'"));
}

TEST_CASE("reduction properties on random words") {
  const Alphabet al = four();
  Rng rng = derive_stream(21, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Word x = sample_word(al, uniform_below(rng, 30), SampleMode::all, rng);
    const Word r = free_reduce(al, x);
    CHECK(free_reduce(al, r) == r);
    CHECK(r.size() <= x.size());
    CHECK(r.size() % 2 == x.size() % 2);
    Word xx = x;
    const Word inv = invert_word(al, x);
    xx.insert(xx.end(), inv.begin(), inv.end());
    CHECK(free_reduce(al, xx).empty());

    const auto c = cyclic_reduce(al, x);
    CHECK(is_cyclically_reduced(al, c.core));
    Word rebuilt = c.conjugator;
    rebuilt.insert(rebuilt.end(), c.core.begin(), c.core.end());
    const Word ci = invert_word(al, c.conjugator);
    rebuilt.insert(rebuilt.end(), ci.begin(), ci.end());
    CHECK(free_reduce(al, rebuilt) == r);
  }
}

TEST_CASE("single letters are cyclically reduced") {
  const Alphabet al = four();
  for (Letter a = 0; a < 4; ++a) CHECK(is_cyclically_reduced(al, {a}));
}

TEST_CASE("sample_word argument checks") {
  Rng rng = derive_stream(22, 0);
  CHECK(sample_word(four(), 0, SampleMode::reduced, rng).empty());
  CHECK(sample_word(four(), 0, SampleMode::cyc_reduced, rng).empty());
  CHECK(sample_word(four(), 0, SampleMode::all, rng).empty());
  const Alphabet two({"a", "a'"}, std::vector<Letter>{1, 0});
  CHECK_THROWS_AS(sample_word(two, 3, SampleMode::reduced, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_word(Alphabet({"x", "y", "z"}), 3, SampleMode::reduced, rng), std::invalid_argument);
  CHECK(sample_word(Alphabet({"x", "y", "z"}), 3, SampleMode::all, rng).size() == 3);
}

TEST_CASE("reduced sampler support has d(d-1)^(n-1) words") {
  const Alphabet al = four();
  for (std::size_t n = 1; n <= 4; ++n) {
    std::set<Word> seen;
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
      Rng rng = derive_stream(seed, n);
      seen.insert(sample_word(al, n, SampleMode::reduced, rng));
    }
    std::size_t expected = 4;
    for (std::size_t i = 1; i < n; ++i) expected *= 3;
    CHECK(seen.size() == expected);
    for (const auto& x : seen) CHECK(free_reduce(al, x) == x);
  }
}

TEST_CASE("cyclically reduced support for n = 2 matches enumeration") {
  const Alphabet al = four();
  std::set<Word> expected;
  oracle::for_each_word(4, 2, [&](const Word& x) {
    if (is_cyclically_reduced(al, x)) expected.insert(x);
  });
  CHECK(expected.size() == 12);
  std::set<Word> seen;
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    Rng rng = derive_stream(seed, 99);
    seen.insert(sample_word(al, 2, SampleMode::cyc_reduced, rng));
  }
  CHECK(seen == expected);
}

TEST_CASE("samplers are uniform (chi-square)") {
  const Alphabet al = four();
  for (SampleMode mode : {SampleMode::all, SampleMode::reduced, SampleMode::cyc_reduced}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<std::size_t> support;
      oracle::for_each_word(4, n, [&](const Word& x) {
        const bool ok = mode == SampleMode::all ||
                        (mode == SampleMode::reduced ? free_reduce(al, x) == x : is_cyclically_reduced(al, x));
        if (ok) support.push_back(code(x, 4));
      });
      std::map<std::size_t, std::size_t> counts;
      Rng rng = derive_stream(23, n, static_cast<std::uint64_t>(mode));
      const std::size_t samples = 100000;
      for (std::size_t i = 0; i < samples; ++i) ++counts[code(sample_word(al, n, mode, rng), 4)];
      REQUIRE(counts.size() == support.size());
      const double expected = static_cast<double>(samples) / static_cast<double>(support.size());
      double chi2 = 0;
      for (std::size_t c : support) {
        const double diff = static_cast<double>(counts[c]) - expected;
        chi2 += diff * diff / expected;
      }
      const boost::math::chi_squared dist(static_cast<double>(support.size() - 1));
      const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
      INFO("mode " << static_cast<int>(mode) << " n " << n << " chi2 " << chi2);
      CHECK(p_value > 0.001);
    }
  }
}

TEST_CASE("sampling is reproducible per stream") {
  const Alphabet al = four();
  Rng a = derive_stream(kDefaultSeed, 5), b = derive_stream(kDefaultSeed, 5), c = derive_stream(kDefaultSeed, 6);
  const Word x = sample_word(al, 20, SampleMode::cyc_reduced, a);
  CHECK(x == sample_word(al, 20, SampleMode::cyc_reduced, b));
  CHECK(x != sample_word(al, 20, SampleMode::cyc_reduced, c));
}

TEST_CASE("word syntax") {
  const Alphabet al = four();
  CHECK(parse_word(al, "a a' b^3") == Word{0, 1, 2, 2, 2});
  CHECK(parse_word(al, "  ").empty());
  CHECK(format_word(al, {0, 0, 0, 3}) == "a^3 b'");
  CHECK(parse_word(al, format_word(al, {0, 0, 3, 1, 1})) == Word{0, 0, 3, 1, 1});
  CHECK_THROWS_AS(parse_word(al, "c"), std::invalid_argument);
  CHECK_THROWS_AS(parse_word(al, "a^x"), std::invalid_argument);
  // an apostrophe resolves to the formal inverse even when not declared
  const Alphabet xy({"x", "X"}, std::vector<Letter>{1, 0});
  CHECK(parse_word(xy, "x'") == Word{1});
}
