// flagcurv: flag curvature of invariant (alpha,beta)-metrics F = (alpha+beta)^2/alpha.

#include "flagcurv/cli/commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

using namespace flagcurv;
using namespace flagcurv::cli;

int main(int argc, char** argv) {
  CLI::App app{"Flag curvature of invariant (alpha,beta)-metrics F = (alpha+beta)^2/alpha"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output = "table";
  std::string convention, method, gy_source, variant = "statement";
  double fd_step = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool force = false;

  const std::map<std::string, std::string> descriptions = {
      {"validate", "Run every structural check on a configuration"},
      {"curvature", "Flag curvature of each flag listed in the configuration"},
      {"scan", "Flag curvature over seeded random flags"},
      {"berwald", "Obstructions to a parallel drift vector X (h_dim = 0)"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, text] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, text);
    sub->add_option("config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", output, "Output format")->check(CLI::IsMember({"table", "json"}));
    if (name == "curvature" || name == "scan") {
      sub->add_option("--convention", convention, "Sign convention")
          ->check(CLI::IsMember({"oracle-aligned", "paper-verbatim"}));
      sub->add_option("--method", method, "Curvature method")
          ->check(CLI::IsMember({"general", "naturally-reductive", "bi-invariant"}));
      sub->add_option("--fd-step", fd_step, "Finite-difference step for --gy-source fd")
          ->check(CLI::PositiveNumber);
      sub->add_option("--gy-source", gy_source, "g_Y used for the definitional K")
          ->check(CLI::IsMember({"closed", "fd"}));
      sub->add_option("--variant", variant, "First term of <R(U,Y)Y,U> (diagnostic)")
          ->check(CLI::IsMember({"statement", "proof"}));
      sub->add_flag("--force", force, "Continue when validation fails (diagnostics)");
    }
    if (name == "scan" || name == "berwald") {
      sub->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
      sub->add_option("--seed", seed, "Random seed");
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  RunOptions run;
  run.output = output == "json" ? OutputFormat::Json : OutputFormat::Table;
  run.force = force;
  if (!convention.empty()) run.convention = parse_convention(convention);
  if (!method.empty()) run.method = parse_method(method);
  if (!gy_source.empty()) run.gy_source = parse_gy_source(gy_source);
  run.variant = parse_variant(variant);
  std::string command;
  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    command = name;
    auto given = [&](const char* option) {
      const CLI::Option* opt = sub->get_option_no_throw(option);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--fd-step")) run.fd_step = fd_step;
    if (given("--samples")) run.samples = samples;
    if (given("--seed")) run.seed = seed;
  }

  const CommandResult result = run_command(command, config_path, run);
  std::cout << result.output;
  std::cerr << result.errors;
  return result.exit_code;
}
