#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli_config.hpp"

namespace bosonrng::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kUsageError = 2,
  kGateRefused = 3,
  kVerificationFailed = 4,
  kIoError = 5,
  kBatteryFailed = 6,
};

int cmd_generate(const Config& config, std::ostream& out);
int cmd_trajectories(const Config& config, std::ostream& out);
int cmd_densities(const Config& config, std::ostream& out);

struct VerifyOptions {
  bool inject_fault = false;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<VerifyCheck> run_verification(const VerifyOptions& options);
int cmd_verify(const VerifyOptions& options, std::ostream& out);

struct BatteryInput {
  std::string path;  // empty: generate from the config
  bool ascii = false;
  std::uint64_t bits = 0;  // 0: from the .meta sidecar or the file size
};

int cmd_battery(const Config& config, const BatteryInput& input, std::ostream& out);

struct BenchRow {
  std::uint64_t steps = 0;
  unsigned parallelism = 1;
  std::uint64_t runs = 0;
  std::uint64_t bits = 0;
  double seconds = 0.0;
  double urn_seconds = 0.0;      // urn stage alone, same runs
  double readout_seconds = 0.0;  // detector + extraction for precomputed limiting values
  bool identical_to_serial = true;

  double bits_per_second() const { return seconds > 0.0 ? static_cast<double>(bits) / seconds : 0.0; }
};

std::vector<BenchRow> run_bench(const Config& config, const std::vector<std::uint64_t>& steps,
                                const std::vector<unsigned>& parallelism);
int cmd_bench(const Config& config, std::ostream& out);

/// Maps exceptions to exit codes and prints the diagnostic to `err`.
template <class F>
int guarded(std::ostream& err, F&& f);

}  // namespace bosonrng::cli

#include "commands_guard.ipp"
