#include <iostream>

#include "CLI11.hpp"
#include "sldlab/cli.hpp"

int main(int argc, char** argv) {
  sldlab::cli::RunConfig cfg;
  CLI::App app{"Square-law detection ambiguity and capacity-gap toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sldlab::kVersion);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--tol-circle", cfg.tol_circle, "Half-width of the on-circle band")->capture_default_str();
    sub->add_option("--tol-root", cfg.tol_root, "Root reconstruction tolerance")->capture_default_str();
    sub->add_option("--round", cfg.round, "Dedupe and output-binning tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for root-finder starts and generated families")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
    sub->add_option("--json", cfg.json_path, "Write the JSON report here instead of stdout");
    sub->add_option("--csv", cfg.csv_path, "Write CSV output here");
  };

  auto* analyze = app.add_subcommand("analyze", "Roots, reciprocal orbits and inside Blaschke product of a polynomial");
  analyze->add_option("input", cfg.inputs, "Polynomial or signal JSON")->required()->check(CLI::ExistingFile);
  common(analyze);

  auto* equiv = app.add_subcommand("equiv", "Constant magnitude-ratio verdict for two polynomials");
  equiv->add_option("inputs", cfg.inputs, "Two polynomial or signal JSON files")->required()->expected(2);
  common(equiv);

  auto* enumerate = app.add_subcommand("enumerate", "All intensity classes of a signal");
  enumerate->add_option("input", cfg.inputs, "Signal JSON")->required()->check(CLI::ExistingFile);
  common(enumerate);

  auto* factor = app.add_subcommand("factor", "All signals with a measured autocorrelation");
  factor->add_option("input", cfg.inputs, "Autocorrelation JSON")->required()->check(CLI::ExistingFile);
  common(factor);

  auto* gap = app.add_subcommand("gap", "Coherent versus square-law mutual information gap");
  gap->add_option("inputs", cfg.inputs, "Constellation JSON files");
  gap->add_option("--sweep", cfg.sweep, "Order range m=A..B; emits CSV");
  common(gap);

  auto* transform = app.add_subcommand("transform", "Check factorization invariance under an invertible intensity map");
  transform->add_option("input", cfg.inputs, "Autocorrelation JSON")->required()->check(CLI::ExistingFile);
  transform->add_option("--map", cfg.map, "identity | sqrt | affine")->capture_default_str();
  transform->add_option("--a", cfg.affine_a, "Affine slope")->capture_default_str();
  transform->add_option("--b", cfg.affine_b, "Affine offset")->capture_default_str();
  common(transform);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return sldlab::cli::run(cfg);
}
