// Command-line driver: scenario ingestion, subcommand dispatch, deterministic
// artifact emission.

#include <string>

#include <CLI11.hpp>

#include "qnd/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "qndsim - decoherence of finite quantum systems under nondestructive "
      "measurements"};
  app.require_subcommand(1);

  std::string input_path;
  std::string out_dir;
  std::string format;
  unsigned threads = 1;

  auto add_common = [&](CLI::App* cmd, const char* input_name,
                        const char* input_desc) {
    cmd->add_option(input_name, input_path, input_desc)->required();
    cmd->add_option("--out", out_dir, "Output directory (overrides the scenario)");
    cmd->add_option("--format", format, "Series output format")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_option("--threads", threads, "Worker threads")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Evolve a scenario and write series artifacts");
  add_common(simulate, "scenario", "Scenario JSON file");

  CLI::App* compare = app.add_subcommand(
      "compare",
      "Cross-check closed form, stepping oracle, and factorized pipelines");
  add_common(compare, "scenario", "Scenario JSON file");

  CLI::App* validate = app.add_subcommand(
      "validate", "Check matrix-mode inputs for nondestructiveness");
  add_common(validate, "matrices", "Matrices JSON file");

  CLI::App* limit = app.add_subcommand(
      "limit", "Print diagonal-ensemble values of the scenario observables");
  add_common(limit, "scenario", "Scenario JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  qnd::RunOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (!format.empty()) options.format = format;
  options.threads = threads;

  if (simulate->parsed()) return qnd::run_simulate(input_path, options);
  if (compare->parsed()) return qnd::run_compare(input_path, options);
  if (validate->parsed()) return qnd::run_validate(input_path, options);
  if (limit->parsed()) return qnd::run_limit(input_path, options);
  return 2;
}
