#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "conemeans/cli.hpp"

namespace cm = conemeans;

int main(int argc, char** argv) {
  CLI::App app{"Power means of positive semidefinite matrices"};
  app.set_version_flag("--version", std::string(cm::kVersion));

  cm::RunConfig cfg;
  std::string command;
  std::string family = "conv";
  app.add_option("command", command, "mean | distance | strength | solve | verify | suite | gap-search")
      ->required()
      ->check(CLI::IsMember({"mean", "distance", "strength", "solve", "verify", "suite", "gap-search"}));
  app.add_option("inputs", cfg.inputs, "Matrix or vector JSON files");
  app.add_option("--p", cfg.p, "Mean exponent")->capture_default_str();
  app.add_option("--family", family, "Mean family")->check(CLI::IsMember({"conv", "ka"}))->capture_default_str();
  app.add_option("--dim", cfg.dim, "Dimension for random suites")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Number of random trials")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--tol-eq", cfg.tol.eq, "Matrix equality tolerance")->capture_default_str();
  app.add_option("--tol-order", cfg.tol.order, "Loewner order margin")->capture_default_str();
  app.add_option("--out", cfg.output, "Report path (default: standard output)");
  app.add_option("--name", cfg.name, "Suite name for `suite`");
  app.add_option("--function", cfg.function, "arithmetic | harmonic | geometric | power:<p> (with --family ka)");
  app.add_option("--form", cfg.form, "congruence | power-congruence | jordan-unitary | jordan-transpose");
  app.add_flag("--conjugate", cfg.conjugate, "Use the conjugate-linear form");
  app.add_flag("--strict", cfg.strict, "Require strict order when solving the conventional equation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return cm::kExitInputError;
  }
  cfg.command = *cm::parse_command(command);
  cfg.family = family == "ka" ? cm::MeanFamily::KuboAndo : cm::MeanFamily::Conventional;
  return cm::run_and_write(cfg, std::cout);
}
