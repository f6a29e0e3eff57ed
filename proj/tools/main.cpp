#include <iostream>

#include <CLI11.hpp>

#include "app.hpp"

int main(int argc, char** argv) {
  using namespace ising_ais::app;
  CLI::App cli{"Annealed importance sampling for Ising models with mixed boundary conditions"};
  cli.require_subcommand(1);

  std::string config;
  RunOptions run_opts;
  std::string out_dir;
  auto* run = cli.add_subcommand("run", "Run an AIS ensemble and write artifacts");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  run->add_option("--workers", run_opts.workers, "Worker threads (0 = all cores)");
  run->add_flag("--history", run_opts.history, "Also write the K x L log-weight history");
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  OracleOptions oracle_opts;
  auto* oracle = cli.add_subcommand("oracle", "Exact values by enumeration (small models)");
  oracle->add_option("config", config, "Experiment config (JSON)")->required();
  oracle->add_flag("--detailed-balance", oracle_opts.detailed_balance,
                   "Also report exact SW detailed-balance residuals");

  std::string run_dir;
  auto* report = cli.add_subcommand("report", "Verify and summarize a run directory");
  report->add_option("dir", run_dir, "Run directory")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*run) {
    if (!out_dir.empty()) run_opts.output_dir = out_dir;
    return cmd_run(config, run_opts, std::cout, std::cerr);
  }
  if (*oracle) return cmd_oracle(config, oracle_opts, std::cout, std::cerr);
  return cmd_report(run_dir, std::cout, std::cerr);
}
