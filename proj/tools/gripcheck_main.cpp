// gripcheck: simulate pick-and-place campaigns, verify requirement
// specifications against trace directories, and export the built-in catalog.
#include <CLI11.hpp>

#include "gripcheck/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Trustworthiness checking for a soft pick-and-place gripper"};
  app.require_subcommand(1);

  gripcheck::SimulateOptions sim_opt;
  std::uint64_t seed_flag = 0;
  auto* sim = app.add_subcommand("simulate", "Run a seeded campaign and write JSONL traces");
  sim->add_option("--config", sim_opt.config_path, "Campaign/gripper config file (TOML subset)");
  sim->add_option("--out", sim_opt.out_dir, "Output directory for traces and manifest")
      ->required();
  auto* seed_opt = sim->add_option("--seed", seed_flag, "Campaign seed (overrides config)");
  sim->add_option("--fault", sim_opt.faults,
                  "Fault knob k[=v]; repeatable (overpressure, degradation=<slope/h>, "
                  "collision_bug, speed_violation)");

  gripcheck::VerifyOptions ver_opt;
  auto* ver = app.add_subcommand("verify", "Evaluate a specification over a trace directory");
  ver->add_option("--spec", ver_opt.spec_path, "Specification file (.gspec); default: built-in catalog");
  ver->add_option("--traces", ver_opt.traces_dir, "Directory of .jsonl traces")->required();
  ver->add_option("--report", ver_opt.report_path, "Report JSON path (default: <traces>/report.json)");
  ver->add_option("--format", ver_opt.format, "Stdout format: table or json")
      ->check(CLI::IsMember({"table", "json"}));
  ver->add_option("--nmin", ver_opt.n_min, "Minimum applicable trials for statistical verdicts");

  gripcheck::CatalogOptions cat_opt;
  auto* cat = app.add_subcommand("catalog", "Write the built-in requirement catalog as .gspec");
  cat->add_option("--out", cat_opt.out_path, "Output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      if (seed_opt->count() > 0) sim_opt.seed = seed_flag;
      return gripcheck::cmd_simulate(sim_opt);
    }
    if (ver->parsed()) return gripcheck::cmd_verify(ver_opt);
    if (cat->parsed()) return gripcheck::cmd_catalog(cat_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
