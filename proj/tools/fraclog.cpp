// fraclog command-line driver.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fraclog/app.hpp"

namespace app = fraclog::app;

int main(int argc, char** argv) {
  CLI::App cli{"Lattice fractional logarithmic Schrodinger solver and checks"};
  cli.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int trials = 100;
  std::optional<std::int64_t> cap;
  bool appendix = false;
  std::string input;
  std::string mode;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "config file (key = value)");
    sub->add_option("--seed", seed, "rng seed, overrides solver.seed");
    sub->add_option("--out", out, "output directory, overrides output.dir");
  };

  auto* solve = cli.add_subcommand("solve", "ground or sign-changing solve; writes field.csv and summary.json");
  add_common(solve);

  auto* project = cli.add_subcommand("project", "project a field CSV onto the Nehari or sign-changing manifold");
  add_common(project);
  project->add_option("field", input, "input field CSV")->required();
  project->add_option("--mode", mode, "ground | sign_changing (default: solver.mode)")
      ->check(CLI::IsMember({"ground", "sign_changing"}));

  auto* verify = cli.add_subcommand("verify", "run the identity suite");
  verify->add_option("--seed", seed, "rng seed (default 1)");
  verify->add_option("--trials", trials, "random trials per check (>= 1)");
  verify->add_flag("--appendix", appendix, "also run the appendix series checks");
  verify->add_option("--cap", cap, "appendix term cap (default 1e8)");

  auto* kernel = cli.add_subcommand("kernel", "print the kernel mass; with --out also write kernel.csv");
  add_common(kernel);

  auto* appx = cli.add_subcommand("appendix", "partial-sum checks of the appendix series");
  appx->add_option("--cap", cap, "largest n summed (default 1e8)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? app::ok : app::usage;
  }

  const app::Overrides ov{seed, out};
  return app::guarded(std::cerr, [&]() -> int {
    if (*solve) return app::cmd_solve(app::resolve_config(config, ov), std::cout, std::cerr);
    if (*project) {
      const auto c = app::resolve_config(config, ov);
      fraclog::SolveMode m = c.mode;
      if (mode == "ground") m = fraclog::SolveMode::ground;
      if (mode == "sign_changing") m = fraclog::SolveMode::sign_changing;
      return app::cmd_project(c, input, m, std::cout);
    }
    if (*verify) {
      std::optional<std::int64_t> appendix_cap;
      if (appendix || cap) appendix_cap = cap.value_or(100000000);
      return app::cmd_verify(seed.value_or(1), trials, appendix_cap, std::cout);
    }
    if (*kernel) return app::cmd_kernel(app::resolve_config(config, ov), out.has_value(), std::cout);
    if (*appx) return app::cmd_appendix(cap.value_or(100000000), std::cout);
    return app::usage;
  });
}
