// bmfix: run Picard orbits, check contraction hypotheses and compare
// fixed-point theorem applicability for a scenario file or a built-in name.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bmfix/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixed points of set-valued quasi-contractions in b-metric spaces"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  bmfix::cli::Overrides ov;
  std::optional<double> tol, beta;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "scenario JSON path or built-in name (paper-example, random-finite)")
        ->required();
    cmd->add_option("--tol", tol, "residual tolerance override");
    cmd->add_option("--beta", beta, "selection parameter override");
    cmd->add_option("--max-iter", max_iter, "iteration cap override");
    cmd->add_option("--seed", seed, "seed for the random-finite built-in");
    cmd->add_option("--format", ov.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* run = app.add_subcommand("run", "iterate the orbit; writes trace and report.json");
  add_common(run);
  run->add_option("--out", out_dir, "output directory");
  auto* verify = app.add_subcommand("verify", "check axioms and the contraction certificate");
  add_common(verify);
  auto* compare = app.add_subcommand("compare", "two-row verdict table for the quasi-contraction tests");
  add_common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : bmfix::cli::kInvalidInput;
  }
  ov.tol = tol;
  ov.beta = beta;
  ov.max_iter = max_iter;
  ov.seed = seed;

  if (*run) return bmfix::cli::cmd_run(scenario, out_dir, ov, std::cout, std::cerr);
  if (*verify) return bmfix::cli::cmd_verify(scenario, ov, std::cout, std::cerr);
  return bmfix::cli::cmd_compare(scenario, ov, std::cout, std::cerr);
}
