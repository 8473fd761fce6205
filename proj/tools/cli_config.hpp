#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "bosonrng/extraction.hpp"

namespace bosonrng::cli {

enum class OutputFormat { raw, ascii, both };

/// Every knob of every subcommand. Written back verbatim into each output
/// as `<output>.config`; loading that file reproduces the run exactly.
struct Config {
  PipelineSpec spec;
  std::uint64_t count = 1'000'000;
  double significance = 0.01;
  OutputFormat format = OutputFormat::raw;
  std::string output = "bosonrng_out";
  std::uint64_t trajectory_runs = 4;
  std::uint64_t density_points = 101;
  std::uint64_t bench_count = 20'000;

  /// Throws ConfigError on unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  /// `key=value` lines; blank lines and `#` comments ignored.
  void load(std::istream& in);
  void load_file(const std::string& path);
  void echo(std::ostream& out) const;
};

/// Parses "key=value".
void apply_override(Config& config, std::string_view assignment);

}  // namespace bosonrng::cli
