#include <CLI11.hpp>

#include <iostream>

#include "spt/cli_runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Superradiant phase-diagram engine"};
  app.require_subcommand(1, 1);
  std::string config;
  std::optional<std::string> out;
  std::optional<int> workers;

  const char* help[] = {"sweep", "Classify a grid of couplings",
                        "boundary", "Locate phase boundaries along rays or a parameter line",
                        "minimize", "Global minimum of the Landau potential",
                        "ed", "Exact diagonalization in truncated Fock space",
                        "selfconsistent", "Critical hopping from the spectral self-consistency",
                        "validate", "Check a configuration without running it"};
  for (int i = 0; i < 12; i += 2) {
    auto* sub = app.add_subcommand(help[i], help[i + 1]);
    sub->add_option("--config", config, "Configuration file (YAML)")->required();
    sub->add_option("--out", out, "Output path; stdout when omitted");
    sub->add_option("--workers", workers, "Worker threads; 0 uses all cores")->check(CLI::Range(0, 1024));
  }
  CLI11_PARSE(app, argc, argv);

  const auto command = spt::cli::parse_command(app.get_subcommands().front()->get_name());
  return spt::cli::run(*command, config, out, workers, std::cout, std::cerr);
}
