#include "hnnlab/schreier.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace hnnlab;
using Catch::Approx;

namespace {

CosetId walk_letters(const Group& g, Vertex sub, const Word& w) {
  CosetId c;
  for (Letter a : w) c = coset_step(g, sub, c, a);
  return c;
}

Letter letter(const Group& g, const char* name) { return *g.alphabet().find(name); }

}  // namespace

TEST_CASE("coset_step examples") {
  const Group am = fixtures::load("amalg22");
  const CosetId k1 = coset_step(am, Vertex::H, {}, letter(am, "k"));
  CHECK_FALSE(k1.is_origin());
  CHECK(coset_step(am, Vertex::H, k1, letter(am, "k")).is_origin());
  CHECK(coset_step(am, Vertex::H, k1, letter(am, "k'")).is_origin());
  CHECK(coset_step(am, Vertex::H, {}, letter(am, "h")).is_origin());
  CHECK_FALSE(coset_step(am, Vertex::K, {}, letter(am, "h")).is_origin());

  const Group b = fixtures::load("bs12");
  const CosetId a1 = coset_step(b, Vertex::H, {}, letter(b, "a"));
  CHECK(a1.is_origin());
  CHECK(coset_step(b, Vertex::H, a1, letter(b, "a'")).is_origin());
  const CosetId t1 = coset_step(b, Vertex::H, {}, letter(b, "t"));
  CHECK_FALSE(t1.is_origin());
  CHECK(coset_step(b, Vertex::H, t1, letter(b, "t'")).is_origin());
  // H t a = H a^2 t = H t
  CHECK(coset_step(b, Vertex::H, t1, letter(b, "a")) == t1);
  CHECK_THROWS_AS(coset_step(b, Vertex::K, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(coset_step(b, Vertex::H, {}, 99), std::invalid_argument);
}

TEST_CASE("coset names are canonical") {
  for (const std::string name : {"bs12", "bs23", "bs12_composite", "amalg22", "amalg32", "z2_twisted", "z2_two_loops"}) {
    INFO(name);
    const Group g = fixtures::load(name);
    const std::vector<Vertex> subs = g.is_hnn() ? std::vector<Vertex>{Vertex::H} : std::vector<Vertex>{Vertex::H, Vertex::K};
    Rng rng = derive_stream(61, std::hash<std::string>{}(name));
    for (Vertex sub : subs) {
      for (int i = 0; i < 2000; ++i) {
        const Word w = sample_word(g.alphabet(), uniform_below(rng, 25), SampleMode::all, rng);
        const CosetId c = coset_of(g, sub, w);
        CHECK(walk_letters(g, sub, w) == c);
        BigVector x(g.rank(sub));
        for (auto& v : x) v = static_cast<long long>(uniform_below(rng, 11)) - 5;
        SyllableWord hw{BaseSyllable{sub, x}};
        append(hw, to_syllables(g, w));
        CHECK(coset_of(g, sub, hw) == c);
        const Word u = sample_word(g.alphabet(), uniform_below(rng, 6), SampleMode::all, rng);
        Word wu = w;
        wu.insert(wu.end(), u.begin(), u.end());
        Word wuu = wu;
        const Word ui = invert_word(g.alphabet(), u);
        wuu.insert(wuu.end(), ui.begin(), ui.end());
        CHECK(coset_of(g, sub, wuu) == c);
      }
    }
  }
}

TEST_CASE("wilson_interval") {
  auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == Approx(0.4038).margin(1e-4));
  CHECK(hi == Approx(0.5962).margin(1e-4));
  std::tie(lo, hi) = wilson_interval(0, 100);
  CHECK(lo == Approx(0.0).margin(1e-12));
  CHECK(hi == Approx(0.0370).margin(1e-4));
  CHECK(wilson_interval(0, 0) == std::pair<double, double>{0.0, 1.0});
}

TEST_CASE("walk_mc basics") {
  const Group am = fixtures::load("amalg22");
  const WalkReport r = walk_mc(am, Vertex::H, 4, 20000, 7);
  CHECK(r.mode == "mc");
  REQUIRE(r.rows.size() == 5);
  CHECK(r.rows[0].p == 1.0);
  CHECK(r.rows[0].trials == 20000);
  CHECK(r.rows[1].p == Approx(0.5).margin(0.02));
  CHECK(r.rows[2].ci_lo <= 0.5);
  CHECK(r.rows[2].ci_hi >= 0.5);
  const WalkReport again = walk_mc(am, Vertex::H, 4, 20000, 7);
  for (std::size_t n = 0; n < 5; ++n) CHECK(again.rows[n].p == r.rows[n].p);
  CHECK(walk_mc(am, Vertex::H, 2, 100, 7, WalkMode::no_backtrack).mode == "mc-nb");
}

TEST_CASE("walk_exact on the amalgam") {
  const Group am = fixtures::load("amalg22");
  const WalkReport r = walk_exact(am, Vertex::H, 6, {WalkMode::plain, true});
  CHECK(r.mode == "exact");
  const std::vector<std::pair<int, int>> expected = {{1, 1}, {1, 2}, {1, 2}, {3, 8}, {3, 8}, {5, 16}, {5, 16}};
  for (std::size_t n = 0; n <= 6; ++n) {
    CHECK(*r.rows[n].numerator == expected[n].first);
    CHECK(*r.rows[n].denominator == expected[n].second);
  }
  const WalkReport nb = walk_exact(am, Vertex::H, 2, {WalkMode::no_backtrack, true});
  CHECK(nb.mode == "exact-nb");
  CHECK(*nb.rows[2].numerator == 1);
  CHECK(*nb.rows[2].denominator == 3);
}

TEST_CASE("rational and float exact walks agree") {
  for (const std::string name : {"bs12", "bs23", "amalg32"}) {
    const Group g = fixtures::load(name);
    for (WalkMode mode : {WalkMode::plain, WalkMode::no_backtrack}) {
      const WalkReport q = walk_exact(g, Vertex::H, 10, {mode, true});
      const WalkReport f = walk_exact(g, Vertex::H, 10, {mode, false});
      for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(f.rows[n].p == Approx(q.rows[n].p).epsilon(1e-12));
        CHECK(q.rows[n].p >= 0.0);
        CHECK(q.rows[n].p <= 1.0);
        CHECK(f.rows[n].trials == 0);
      }
    }
  }
}

TEST_CASE("walk_exact matches enumeration of all words") {
  for (const std::string name : {"bs12", "bs23", "amalg22", "amalg32", "bs12_composite"}) {
    INFO(name);
    const Group g = fixtures::load(name);
    const std::size_t n_max = g.alphabet().size() > 4 ? 5 : 7;
    const auto oracle_p = oracle::return_probabilities_by_words(g, Vertex::H, n_max);
    const WalkReport r = walk_exact(g, Vertex::H, n_max, {WalkMode::plain, true});
    for (std::size_t n = 0; n <= n_max; ++n) CHECK(r.rows[n].p == Approx(oracle_p[n]).epsilon(1e-12));
  }
}

TEST_CASE("no-backtrack walks match enumeration of reduced words") {
  for (const std::string name : {"bs12", "bs23", "amalg22"}) {
    INFO(name);
    const Group g = fixtures::load(name);
    const std::size_t n_max = 7;
    std::vector<std::uint64_t> hits(n_max + 1, 0), total(n_max + 1, 0);
    oracle::for_each_reduced_word(g.alphabet(), n_max, [&](const Word& w) {
      ++total[w.size()];
      hits[w.size()] += coset_of(g, Vertex::H, w).is_origin();
    });
    const WalkReport r = walk_exact(g, Vertex::H, n_max, {WalkMode::no_backtrack, true});
    for (std::size_t n = 0; n <= n_max; ++n) {
      CHECK(*r.rows[n].numerator * total[n] == *r.rows[n].denominator * hits[n]);
    }
  }
}

TEST_CASE("Monte Carlo intervals cover the exact values") {
  const Group g = fixtures::load("bs23");
  const std::size_t n_max = 12;
  const WalkReport exact = walk_exact(g, Vertex::H, n_max);
  std::size_t inside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WalkReport mc = walk_mc(g, Vertex::H, n_max, 4000, 1000 + seed);
    for (std::size_t n = 1; n <= n_max; ++n) {
      ++total;
      inside += mc.rows[n].ci_lo <= exact.rows[n].p && exact.rows[n].p <= mc.rows[n].ci_hi;
    }
  }
  CHECK(static_cast<double>(inside) >= 0.9 * static_cast<double>(total));
}

TEST_CASE("Catalan lower bound for BS(1,2)") {
  CHECK(oracle::dyck_projection_count(0) == 1);
  CHECK(oracle::dyck_projection_count(2) == 5);
  for (std::size_t len = 0; len <= 8; ++len) CHECK(BigInt(oracle::dyck_projection_count(len)) == oracle::dyck_projection_formula(len));
  const Group g = fixtures::load("bs12");
  const WalkReport r = walk_exact(g, Vertex::H, 8, {WalkMode::plain, true});
  for (std::size_t len = 2; len <= 8; len += 2) {
    const BigInt bound = oracle::dyck_projection_count(len);
    CHECK(*r.rows[len].numerator * (BigInt(1) << (2 * len)) >= bound * *r.rows[len].denominator);
  }
}

TEST_CASE("memory cap") {
  const Group g = fixtures::load("bs23");
  try {
    walk_exact(g, Vertex::H, 10, {WalkMode::plain, false, 50});
    FAIL("expected resource_cap_exceeded");
  } catch (const resource_cap_exceeded& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() <= 10);
  }
  CHECK_NOTHROW(walk_exact(g, Vertex::H, 3, {WalkMode::plain, false, 1000}));
}

TEST_CASE("walk argument checks") {
  const Group g = fixtures::load("bs12");
  CHECK_THROWS_AS(walk_mc(g, Vertex::K, 3, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(walk_exact(g, Vertex::K, 3), std::invalid_argument);
}

TEST_CASE("genericity_experiment examples") {
  const Group g = fixtures::load("bs12");
  std::uint64_t exhaustive = 0;
  oracle::for_each_word(4, 2, [&](const Word& w) { exhaustive += classify_element(g, w).kind == ElementKind::elliptic; });
  CHECK(exhaustive == 6);

  const GenericityReport r = genericity_experiment(g, {0, 1, 2}, 20000, 3, GenericDomain::sigma_star);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].fraction() == 1.0);
  CHECK(r.rows[1].fraction() == Approx(0.5).margin(0.02));
  CHECK(r.rows[2].fraction() == Approx(6.0 / 16).margin(0.02));
  const GenericityReport same = genericity_experiment(g, {0, 1, 2}, 20000, 3, GenericDomain::sigma_star);
  CHECK(same.rows[2].elliptic == r.rows[2].elliptic);

  const GenericityReport d = genericity_experiment(g, {1, 2}, 5000, 3, GenericDomain::delta);
  CHECK(std::string(to_string(d.domain)) == "cyc-reduced");
  CHECK(d.rows[0].fraction() == Approx(0.5).margin(0.04));
  // cyclically reduced words of length 2: a a, a' a' elliptic out of 12
  CHECK(d.rows[1].fraction() == Approx(2.0 / 12).margin(0.03));
}

TEST_CASE("decay_fit on synthetic series") {
  std::vector<std::pair<std::size_t, double>> exp_series, poly_series;
  for (std::size_t n = 1; n <= 40; ++n) {
    exp_series.emplace_back(n, std::pow(2.0, -static_cast<double>(n)));
    poly_series.emplace_back(n, 3.0 / std::sqrt(static_cast<double>(n)));
  }
  const DecayFit e = decay_fit(exp_series);
  CHECK(e.exp_rate == Approx(-1).margin(0.01));
  CHECK(e.exp_fit.r2 == Approx(1).margin(1e-9));
  CHECK(e.points == 40);
  const DecayFit p = decay_fit(poly_series);
  CHECK(p.poly_exponent == Approx(-0.5).margin(0.01));

  const DecayFit window = decay_fit(exp_series, {10, 20, true});
  CHECK(window.points == 6);
  CHECK_THROWS_AS(decay_fit(exp_series, {1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(decay_fit(std::vector<std::pair<std::size_t, double>>{{1, 0.5}, {2, 0.0}, {3, 0.1}}), std::invalid_argument);
}
