#include <climits>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "glab/config.hpp"
#include "glab/errors.hpp"
#include "glab/experiments.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  int n_max = 0;
  int truncation = 0;
  std::string window;
  long long seed = 0;
};

void attach_shared(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "experiment config (JSON)")
      ->required();
  sub->add_option("--out", o.out_dir, "output directory (default: out)");
  sub->add_option("--n-max", o.n_max, "override experiment.n_max");
  sub->add_option("--truncation", o.truncation,
                  "override experiment.truncation (-1 = unlimited)");
  sub->add_option("--window", o.window, "override fit window, as A,B");
  sub->add_option("--seed", o.seed, "override experiment.seed");
}

void apply_overrides(const CLI::App* sub, const Options& o,
                     glab::ExperimentConfig& cfg) {
  if (sub->count("--n-max")) {
    if (o.n_max < 1)
      throw glab::SchemaError("cli: --n-max must be >= 1");
    cfg.params.n_max = o.n_max;
  }
  if (sub->count("--truncation")) cfg.params.truncation = o.truncation;
  if (sub->count("--window")) {
    int a = 0, b = 0;
    if (std::sscanf(o.window.c_str(), "%d,%d", &a, &b) != 2 || a < 1 || b < a)
      throw glab::SchemaError(
          "cli: --window expects A,B with 1 <= A <= B, got '" + o.window +
          "'");
    cfg.params.window_lo = a;
    cfg.params.window_hi = b;
  }
  if (sub->count("--seed")) cfg.params.seed = o.seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "glab: growth, spectra and variational experiments for random shifts "
      "of finite type and their group extensions"};
  app.require_subcommand(1);

  Options opt;
  const char* experiments[] = {"entropy",     "gap",         "kesten",
                               "folner",      "variational", "gibbs-check",
                               "operator-radius"};
  const char* briefs[] = {
      "relative entropy via partition growth and the fiber eigenproblem",
      "entropy gap between abelianized and full constrained growth",
      "spectral radius of the symmetric random walk on the group",
      "exact Folner defect of a ball against a test set",
      "minimize the tilted pressure and compare with constrained counting",
      "two-sided Gibbs bounds for the fiber equilibrium measure",
      "growth of the extended transfer operator and Markov averages"};
  for (size_t i = 0; i < std::size(experiments); ++i)
    attach_shared(app.add_subcommand(experiments[i], briefs[i]), opt);
  attach_shared(
      app.add_subcommand("describe",
                         "dry-run plan: instance summary and cost forecast"),
      opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    glab::emit_error_record("schema", 2, std::string("cli: ") + e.what(),
                            opt.out_dir.empty() ? "out" : opt.out_dir);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  try {
    glab::ExperimentConfig cfg = glab::parse_config_file(opt.config_path);
    apply_overrides(sub, opt, cfg);
    if (command == "describe") {
      std::cout << glab::describe(cfg);
      return 0;
    }
    if (cfg.params.name != command)
      throw glab::SchemaError("config: $.experiment.name: config names '" +
                              cfg.params.name +
                              "' but the command line asked for '" + command +
                              "'");
    return glab::run_experiment(cfg, opt.out_dir);
  } catch (const glab::GlabError& e) {
    glab::emit_error_record(e.kind, e.exit_code, e.what(), opt.out_dir);
    return e.exit_code;
  } catch (const std::exception& e) {
    glab::emit_error_record("internal", 1, e.what(), opt.out_dir);
    return 1;
  }
}
