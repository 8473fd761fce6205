#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_config.hpp"
#include "commands.hpp"

using namespace bosonrng::cli;

namespace {

std::string defaults_footer() {
  std::ostringstream os;
  os << "\nConfiguration keys (defaults shown) may be given in a --config file\n"
        "and/or as trailing key=value overrides:\n\n";
  Config{}.echo(os);
  os << "\nExit codes: 0 ok, 1 internal error, 2 usage/config error, 3 noise gate refused,\n"
        "4 verification failed, 5 I/O error, 6 battery test failed.\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bosonic-stimulation random bit simulator"};
  app.footer(defaults_footer());
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config_options = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "key=value configuration file");
    sub->add_option("overrides", overrides, "key=value overrides applied after the file");
  };

  auto* generate = app.add_subcommand("generate", "run the pipeline and write a bitstream");
  auto* trajectories = app.add_subcommand("trajectories", "write per-run fraction-vs-step CSVs");
  auto* densities = app.add_subcommand("densities", "write t,pdf,cdf CSV and quantile thresholds");
  auto* verify = app.add_subcommand("verify", "run the exact oracle and distribution checks");
  auto* battery = app.add_subcommand("battery", "run the statistical test battery");
  auto* bench = app.add_subcommand("bench", "measure simulator throughput");
  for (auto* sub : {generate, trajectories, densities, battery, bench}) add_config_options(sub);

  VerifyOptions verify_options;
  verify->add_flag("--inject-fault", verify_options.inject_fault,
                   "perturb the amplitude branching to check that failures are detected");

  BatteryInput battery_input;
  battery->add_option("-i,--input", battery_input.path, "bitstream file (default: generate from config)");
  battery->add_flag("--ascii", battery_input.ascii, "input holds '0'/'1' characters");
  battery->add_option("--bits", battery_input.bits, "number of bits to read (default: from .meta or file size)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  return guarded(std::cerr, [&]() -> int {
    Config config;
    if (!config_path.empty()) config.load_file(config_path);
    for (const auto& o : overrides) apply_override(config, o);

    if (generate->parsed()) return cmd_generate(config, std::cout);
    if (trajectories->parsed()) return cmd_trajectories(config, std::cout);
    if (densities->parsed()) return cmd_densities(config, std::cout);
    if (verify->parsed()) return cmd_verify(verify_options, std::cout);
    if (battery->parsed()) return cmd_battery(config, battery_input, std::cout);
    if (bench->parsed()) return cmd_bench(config, std::cout);
    return kUsageError;
  });
}
