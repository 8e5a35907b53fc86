#include "chlab/experiments.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the periodic two-component Camassa-Holm system"};
  app.require_subcommand(1);
  app.fallthrough();  // common flags may follow the subcommand

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = chlab::SelftestOptions{}.seed;
  double stiffness = 1.0;

  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides the config's output key)");
  app.add_option("--seed", seed, "seed for the randomized self-test fields");

  auto* simulate = app.add_subcommand("simulate", "run the solver and write run.csv and summary.json");
  auto* criterion = app.add_subcommand("criterion", "evaluate the breaking criterion and write report.json");
  auto* sweep = app.add_subcommand("sweep", "criterion (and optional runs) over a bump family; writes sweep.csv");
  auto* selftest = app.add_subcommand("selftest", "invariant suite; nonzero exit on failure");
  selftest->add_option("--kernel-stiffness", stiffness, "corrupt the Helmholtz kernel (fault injection)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*selftest) {
      const int failures = chlab::cmd_selftest({seed, stiffness}, std::cout);
      return failures == 0 ? 0 : 1;
    }
    const chlab::RunConfig config = config_path.empty() ? chlab::RunConfig{} : chlab::load_config(config_path);
    const std::filesystem::path out = out_dir.empty() ? config.output : out_dir;
    if (*simulate) return chlab::cmd_simulate(config, out, std::cout);
    if (*criterion) return chlab::cmd_criterion(config, out, std::cout);
    if (*sweep) return chlab::cmd_sweep(config, out, std::cout);
  } catch (const chlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
