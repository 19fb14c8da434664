// Command-line driver: grj {run, metrics, list}.

#include <iostream>

#include <CLI11.hpp>

#include "grj/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generalized reduced Jacobian solver for equality- and box-constrained multiobjective problems"};
  app.require_subcommand(1);

  grj::RunSpec spec;
  std::string phi = "p1";
  std::string format = "csv";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--problem", spec.problems, "Problem name (repeatable)");
    cmd->add_option("--out", spec.out_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--disc-brake-verbatim", spec.disc_brake_verbatim,
                  "Use the literal Disc Brake constraint form (empty feasible set)");
  };

  CLI::App* run = app.add_subcommand("run", "Solve problems from a seeded population of starts");
  add_common(run);
  run->add_option("--starts", spec.n_starts, "Number of starts")->capture_default_str();
  run->add_option("--seed", spec.config.seed, "Random seed")->capture_default_str();
  run->add_option("--beta", spec.config.beta, "Armijo constant")->capture_default_str();
  run->add_option("--phi", phi, "Gap functional")
      ->check(CLI::IsMember({"p1", "p05", "indicator"}))
      ->capture_default_str();
  run->add_option("--tol", spec.config.stop_tol, "Stop when the subproblem value drops below this")
      ->capture_default_str();
  run->add_option("--max-outer", spec.config.max_outer, "Outer iteration cap")->capture_default_str();
  run->add_option("--format", format, "Front/solution file format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  run->add_option("--jobs", spec.jobs, "Concurrent starts")->capture_default_str();

  CLI::App* metrics = app.add_subcommand("metrics", "Purity, spread, GD and performance profiles");
  add_common(metrics);
  metrics->add_option("--grid", spec.grid, "Use a grid oracle front with this many points per axis");
  metrics->add_option("--external-front", spec.external_fronts,
                      "Extra front as [problem:][solver=]path (headerless CSV)");

  app.add_subcommand("list", "List registered problems");

  CLI11_PARSE(app, argc, argv);

  if (phi == "p05") {
    spec.config.phi = grj::PhiChoice::power(0.5);
  } else if (phi == "indicator") {
    spec.config.phi = grj::PhiChoice::indicator();
  }
  spec.format = format == "json" ? grj::OutputFormat::Json : grj::OutputFormat::Csv;

  if (app.got_subcommand("list")) return grj::cmd_list(grj::ProblemRegistry::builtin(), std::cout);
  if (app.got_subcommand("run")) return grj::cmd_run(spec, std::cout, std::cerr);
  return grj::cmd_metrics(spec, std::cout, std::cerr);
}
