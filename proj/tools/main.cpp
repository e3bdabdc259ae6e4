#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ensflow/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string backend;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--backend", args.backend, "Expectation backend: mc | fourier | both");
  cmd->add_option("--out", args.out_dir, "Output directory (default from config)");
  cmd->add_option("--seed", args.seed, "Root seed override")->each([&args](const std::string&) {
    args.seed_set = true;
  });
}

ensflow::RunConfig load(const CommonArgs& args) {
  ensflow::RunConfig cfg = ensflow::load_config(args.config_path);
  if (!args.backend.empty()) cfg.backend = ensflow::parse_backend(args.backend);
  if (args.seed_set) cfg.numerics.seed = args.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensflow: ensemble averages of integrable flows with action jumps"};
  app.require_subcommand(1);

  CommonArgs validate_args, simulate_args, verify_args;
  std::string verify_which;
  bool negative_control = false;

  CLI::App* validate = app.add_subcommand("validate", "Check schedule, density and hypothesis "
                                                      "invariants; write validate.json");
  attach_common(validate, validate_args);

  CLI::App* simulate = app.add_subcommand("simulate", "Tabulate <G>_t on the configured time "
                                                      "grid; write simulate.csv");
  attach_common(simulate, simulate_args);

  CLI::App* verify = app.add_subcommand("verify", "Run a convergence-theorem driver: "
                                                  "4.1 | 4.2 | 5.1 | rl");
  verify->add_option("which", verify_which, "Driver: 4.1 | 4.2 | 5.1 | rl")->required();
  attach_common(verify, verify_args);
  verify->add_flag("--negative-control", negative_control,
                   "Expect the criterion to fail (exit 0 when it does)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      ensflow::RunOptions opts{validate_args.out_dir, false};
      return ensflow::run_validate(load(validate_args), opts, std::cout);
    }
    if (simulate->parsed()) {
      ensflow::RunOptions opts{simulate_args.out_dir, false};
      return ensflow::run_simulate(load(simulate_args), opts, std::cout);
    }
    ensflow::RunOptions opts{verify_args.out_dir, negative_control};
    return ensflow::run_verify(load(verify_args), verify_which, opts, std::cout);
  } catch (const ensflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ensflow::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ensflow::kExitFail;
  }
}
