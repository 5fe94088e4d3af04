#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_overrides(CLI::App* app, glin::cli::Overrides& o) {
  app->add_option("--seed", o.seed, "Seed for starts, witnesses and audits");
  app->add_option("--output", o.output, "Output directory (default: output.dir, then $GLIN_OUTPUT_DIR, then .)");
  app->add_option("--max-iter", o.max_iter, "Override descent.n_max")->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "Override descent.eps")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glin: descent with generalized linearizations on manifolds and loop spaces"};
  app.require_subcommand(1);

  glin::cli::Overrides o;
  std::string config;
  glin::cli::CheckOptions check;

  auto* solve = app.add_subcommand("solve", "Run the descent described by a config file");
  solve->add_option("config", config, "Config file")->required();
  add_overrides(solve, o);

  auto* fixed = app.add_subcommand("fixed-point", "Search for a fixed point of a built-in self-map");
  fixed->add_option("config", config, "Config file")->required();
  add_overrides(fixed, o);

  auto* metric = app.add_subcommand("metric", "Tabulate d_X on sampled pairs and audit the metric axioms");
  metric->add_option("config", config, "Config file")->required();
  add_overrides(metric, o);

  auto* chk = app.add_subcommand("check", "Run the invariant suite with fixed seeds");
  chk->add_flag("--list", check.list, "Print check names and exit");
  chk->add_option("--inject-fault", check.inject_fault, "Plant a known defect in the named check");
  add_overrides(chk, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*solve) return glin::cli::cmd_solve(config, o, std::cout, std::cerr);
  if (*fixed) return glin::cli::cmd_fixed_point(config, o, std::cout, std::cerr);
  if (*metric) return glin::cli::cmd_metric(config, o, std::cout, std::cerr);
  return glin::cli::cmd_check(check, o, std::cout, std::cerr);
}
