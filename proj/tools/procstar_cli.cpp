#include <iostream>

#include <CLI11.hpp>

#include "procstar/harness/runner.hpp"

int main(int argc, char** argv) {
  using procstar::harness::RunOptions;
  CLI::App app{"Numerical checks for towers of finite-dimensional C*-algebras"};
  RunOptions options;

  app.add_option("command", options.command, "What to run")
      ->required()
      ->check(CLI::IsMember(procstar::harness::commands()));
  app.add_option("--spec", options.spec_path, "Tower description file (JSON)");
  app.add_option("--horizon", options.horizon, "Deepest level to materialize")->check(CLI::PositiveNumber);
  app.add_option("--tol", options.tol, "Tolerance override")->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Seed for all random probes");
  app.add_option("--out", options.out_path, "Write the JSONL report here");
  app.add_option("--threshold", options.threshold, "Divergence threshold for boundedness verdicts")
      ->check(CLI::PositiveNumber);
  app.add_option("--element", options.element, "Run on this element instead of the spec's directives");
  app.add_option("--tower", options.tower, "Run on this tower instead of the spec's directives");
  app.add_option("--space", options.space, "Run on this covered space instead of the spec's directives");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return procstar::harness::run(options, std::cout, std::cerr);
}
