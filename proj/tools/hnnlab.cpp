#include "hnnlab/cli.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
  using namespace hnnlab;
  CLI::App app{"hnnlab: normal forms, conjugacy and Schreier walks for splittings over free abelian groups"};
  app.require_subcommand(1);
  RunConfig c;

  auto with_presentation = [&](CLI::App* sub) {
    sub->add_option("presentation", c.presentation, "Presentation JSON file")->required()->check(CLI::ExistingFile);
  };
  auto with_words = [&](CLI::App* sub, int n) {
    sub->add_option("words", c.words, "Words: space-separated letters, x' for inverses, x^k for powers")
        ->required()
        ->expected(n);
  };

  auto* validate = app.add_subcommand("validate", "Check a presentation file");
  with_presentation(validate);

  auto* nf = app.add_subcommand("nf", "Print the normal form of a word");
  with_presentation(nf);
  with_words(nf, 1);

  auto* wp = app.add_subcommand("wp", "Decide whether a word is the identity");
  with_presentation(wp);
  with_words(wp, 1);

  auto* classify = app.add_subcommand("classify-word", "Elliptic or hyperbolic, with cyclic core");
  with_presentation(classify);
  with_words(classify, 1);

  auto* conj = app.add_subcommand("conj", "Decide conjugacy of two words");
  with_presentation(conj);
  with_words(conj, 2);
  conj->add_flag("--witness", c.witness, "Also print the witness as syllables");
  conj->add_option("--orbit-bound", c.orbit_bound, "Iteration bound for elliptic orbit searches")->capture_default_str();

  auto* predict = app.add_subcommand("predict", "Predicted amenability of the Schreier graph");
  with_presentation(predict);
  predict->add_option("--subgroup", c.subgroup, "Vertex group H or K")->check(CLI::IsMember({"H", "K"}));

  auto* walk = app.add_subcommand("walk", "Return probabilities of the simple random walk");
  with_presentation(walk);
  walk->add_option("--subgroup", c.subgroup, "Vertex group H or K")->check(CLI::IsMember({"H", "K"}));
  walk->add_option("--nmax", c.nmax, "Largest walk length")->capture_default_str();
  walk->add_option("--mode", c.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  walk->add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str();
  walk->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  walk->add_flag("--no-backtrack", c.no_backtrack, "Never follow the inverse of the previous letter");
  walk->add_flag("--rational", c.rational, "Exact mode: report p as an exact fraction");
  walk->add_option("--memory-cap", c.memory_cap, "Exact mode: maximum number of states")->capture_default_str();
  walk->add_option("--output", c.output, "CSV file (default: standard output)");

  auto* generic = app.add_subcommand("generic", "Elliptic fraction among random words");
  with_presentation(generic);
  generic->add_option("--lengths", c.lengths, "Word lengths")->delimiter(',')->capture_default_str();
  generic->add_option("--samples", c.samples, "Samples per length")->capture_default_str();
  generic->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  generic->add_option("--domain", c.domain, "all or cyc-reduced")
      ->check(CLI::IsMember({"all", "cyc-reduced"}))
      ->capture_default_str();
  generic->add_option("--output", c.output, "CSV file (default: standard output)");

  auto* fit = app.add_subcommand("fit", "Fit decay laws to a walk report");
  fit->add_option("report", c.report, "Walk CSV report")->required()->check(CLI::ExistingFile);
  fit->add_option("--nmin", c.fit_n_min, "Smallest n used")->capture_default_str();
  fit->add_option("--nmax", c.fit_n_max, "Largest n used");
  fit->add_flag("--even", c.fit_even_only, "Use even n only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c);
}
