#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Hamilton-Jacobi experiment runner"};
  app.require_subcommand(1);

  std::string config, experiment, out;
  auto* run = app.add_subcommand("run", "Run one experiment and write summary.json plus CSVs");
  run->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--experiment", experiment, "Experiment name")->required();
  run->add_option("--out", out, "Output directory")->required();

  auto* val = app.add_subcommand("validate", "Check a config and print derived exponents");
  val->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return nlhj::cli::run(config, experiment, out, std::cout);
  return nlhj::cli::validate(config, std::cout);
}
