#pragma once

// Command dispatch behind the hnnlab executable. run() never throws; errors
// are reported on the error stream and encoded in the exit code.

#include "hnnlab/config.hpp"
#include "hnnlab/conjugacy.hpp"
#include "hnnlab/schreier.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace hnnlab {

enum ExitCode : int { kExitOk = 0, kExitRefused = 1, kExitInvalid = 2, kExitResource = 3 };

struct RunConfig {
  std::string command;
  std::string presentation;      // path of the JSON presentation
  std::vector<std::string> words;

  // conj
  bool witness = false;
  std::size_t orbit_bound = ConjugacyOptions{}.orbit_bound;

  // predict, walk
  std::string subgroup = "H";

  // walk
  std::size_t nmax = 20;
  std::string mode = "exact";
  std::uint64_t trials = 100000;
  std::uint64_t seed = kDefaultSeed;
  bool no_backtrack = false;
  bool rational = false;
  std::size_t memory_cap = kDefaultMemoryCap;
  std::string output;  // empty: standard output

  // generic
  std::vector<std::size_t> lengths{10, 20, 30, 40};
  std::uint64_t samples = 10000;
  std::string domain = "all";

  // fit
  std::string report;
  std::size_t fit_n_min = 1;
  std::size_t fit_n_max = static_cast<std::size_t>(-1);
  bool fit_even_only = false;
};

inline std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

inline std::string walk_csv(const WalkReport& r) {
  std::ostringstream out;
  out << "n,p,ci_lo,ci_hi,trials,mode\n";
  for (const auto& row : r.rows) {
    out << row.n << ',';
    if (row.numerator)
      out << *row.numerator << '/' << *row.denominator;
    else
      out << format_double(row.p);
    out << ',' << format_double(row.ci_lo) << ',' << format_double(row.ci_hi) << ',' << row.trials << ',' << r.mode
        << '\n';
  }
  return out.str();
}

inline std::string genericity_csv(const GenericityReport& r) {
  std::ostringstream out;
  out << "n,samples,elliptic,fraction,domain\n";
  for (const auto& row : r.rows)
    out << row.n << ',' << row.samples << ',' << row.elliptic << ',' << format_double(row.fraction()) << ','
        << to_string(r.domain) << '\n';
  return out.str();
}

/// (n, p) pairs from a walk CSV; p may be a decimal or an exact fraction.
inline std::vector<std::pair<std::size_t, double>> read_walk_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,p", 0) != 0) throw std::invalid_argument("not a walk report (bad header)");
  std::vector<std::pair<std::size_t, double>> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string n, p;
    if (!std::getline(fields, n, ',') || !std::getline(fields, p, ','))
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected n,p");
    try {
      double value;
      if (auto slash = p.find('/'); slash != std::string::npos)
        value = static_cast<double>(
            boost::multiprecision::cpp_rational(parse_bigint(p.substr(0, slash)), parse_bigint(p.substr(slash + 1))));
      else
        value = std::stod(p);
      out.emplace_back(std::stoull(n), value);
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

namespace detail {

inline Vertex parse_vertex(const std::string& s) {
  if (s == "H") return Vertex::H;
  if (s == "K") return Vertex::K;
  throw std::invalid_argument("subgroup must be H or K");
}

inline std::string render_witness(const Group& g, const SyllableWord& z) {
  if (auto w = express_in_letters(g, z)) return w->empty() ? "1" : format_word(g.alphabet(), *w);
  return format_syllables(g, z);
}

inline void need_words(const RunConfig& c, std::size_t n) {
  if (c.words.size() != n)
    throw std::invalid_argument(c.command + " expects " + std::to_string(n) + " word argument(s)");
}

inline int write_report(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(c.output);
  if (!f) throw std::runtime_error("cannot write '" + c.output + "'");
  f << text;
  return kExitOk;
}

inline int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "fit") {
    std::ifstream in(c.report);
    if (!in) throw std::runtime_error("cannot open '" + c.report + "'");
    DecayFitOptions opt{c.fit_n_min, c.fit_n_max, c.fit_even_only};
    const DecayFit f = decay_fit(read_walk_csv(in), opt);
    out << "points," << f.points << '\n'
        << "exp_rate," << format_double(f.exp_rate) << '\n'
        << "exp_r2," << format_double(f.exp_fit.r2) << '\n'
        << "poly_exponent," << format_double(f.poly_exponent) << '\n'
        << "poly_r2," << format_double(f.poly_fit.r2) << '\n';
    return kExitOk;
  }

  const Presentation p = load_config(c.presentation);
  const Group g(p);
  const Alphabet& alpha = g.alphabet();
  auto word = [&](std::size_t i) { return to_syllables(g, parse_word(alpha, c.words.at(i))); };

  if (c.command == "validate") {
    out << "valid\n";
    return kExitOk;
  }
  if (c.command == "nf") {
    need_words(c, 1);
    out << format_normal_form(g, normal_form(g, word(0))) << '\n';
    return kExitOk;
  }
  if (c.command == "wp") {
    need_words(c, 1);
    out << (word_problem(g, word(0)) ? "true" : "false") << '\n';
    return kExitOk;
  }
  if (c.command == "classify-word") {
    need_words(c, 1);
    const ElementClass k = classify_element(g, word(0));
    out << (k.kind == ElementKind::elliptic ? "Elliptic" : "Hyperbolic") << '\n'
        << "core: " << format_syllables(g, k.reduction.core) << '\n'
        << "conjugator: " << format_syllables(g, k.reduction.conjugator) << '\n';
    return kExitOk;
  }
  if (c.command == "conj") {
    need_words(c, 2);
    ConjugacyOptions opt;
    opt.orbit_bound = c.orbit_bound;
    const Verdict v = conjugate(g, word(0), word(1), opt);
    out << to_string(v.kind) << '\n';
    if (v.is_yes()) {
      out << "witness: " << render_witness(g, v.witness) << '\n';
      if (c.witness) out << "witness syllables: " << format_syllables(g, v.witness) << '\n' << "verified: true\n";
    } else {
      out << "reason: " << v.reason << '\n';
    }
    return v.is_refused() ? kExitRefused : kExitOk;
  }
  if (c.command == "predict") {
    out << to_string(classify_schreier_amenability(g, parse_vertex(c.subgroup))) << '\n';
    return kExitOk;
  }
  if (c.command == "walk") {
    const Vertex sub = parse_vertex(c.subgroup);
    const WalkMode mode = c.no_backtrack ? WalkMode::no_backtrack : WalkMode::plain;
    WalkReport r;
    if (c.mode == "exact")
      r = walk_exact(g, sub, c.nmax, {mode, c.rational, c.memory_cap});
    else if (c.mode == "mc")
      r = walk_mc(g, sub, c.nmax, c.trials, c.seed, mode);
    else
      throw std::invalid_argument("mode must be exact or mc");
    return write_report(c, walk_csv(r), out);
  }
  if (c.command == "generic") {
    GenericDomain d;
    if (c.domain == "all")
      d = GenericDomain::sigma_star;
    else if (c.domain == "cyc-reduced")
      d = GenericDomain::delta;
    else
      throw std::invalid_argument("domain must be all or cyc-reduced");
    return write_report(c, genericity_csv(genericity_experiment(g, c.lengths, c.samples, c.seed, d)), out);
  }
  throw std::invalid_argument("unknown command '" + c.command + "'");
}

}  // namespace detail

/// Runs one command. Exit codes: 0 success, 1 refused conjugacy verdict,
/// 2 invalid input or presentation, 3 resource cap exceeded.
inline int run(const RunConfig& config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    return detail::dispatch(config, out);
  } catch (const config_error& e) {
    err << "invalid presentation:\n";
    for (const auto& v : e.problems()) err << "  " << v << '\n';
    return kExitInvalid;
  } catch (const resource_cap_exceeded& e) {
    err << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace hnnlab
