#include "cli_config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "bosonrng/error.hpp"

namespace bosonrng::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config: " + std::string(key) + " expects a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(std::string(v), &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: " + std::string(key) + " expects a number, got '" + std::string(v) + "'");
  }
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: " + std::string(key) + " expects true/false, got '" + std::string(v) + "'");
}

unsigned parse_unsigned(std::string_view key, std::string_view v) {
  const auto x = parse_u64(key, v);
  if (x > 0xFFFFFFFFull) throw ConfigError("config: " + std::string(key) + " out of range");
  return static_cast<unsigned>(x);
}

}  // namespace

void Config::set(std::string_view key, std::string_view value) {
  auto& run = spec.run;
  if (key == "seed") {
    run.seed = parse_u64(key, value);
  } else if (key == "initial_blue") {
    run.initial_blue = parse_u64(key, value);
  } else if (key == "initial_red") {
    run.initial_red = parse_u64(key, value);
  } else if (key == "steps") {
    run.steps = parse_u64(key, value);
  } else if (key == "record_stride") {
    run.record_stride = parse_u64(key, value);
  } else if (key == "first_run_index") {
    run.run_index = parse_u64(key, value);
  } else if (key == "epsilon") {
    run.epsilon = parse_double(key, value);
  } else if (key == "input") {
    if (value == "number_states") {
      spec.input = InputKind::number_states;
    } else if (value == "coherent") {
      spec.input = InputKind::coherent;
    } else {
      throw ConfigError("config: input must be number_states or coherent");
    }
  } else if (key == "lambda_min") {
    spec.mixture.lambda_min = parse_double(key, value);
  } else if (key == "lambda_max") {
    spec.mixture.lambda_max = parse_double(key, value);
  } else if (key == "truncation_mass") {
    spec.mixture.truncation_mass = parse_double(key, value);
  } else if (key == "lambda_grid") {
    spec.mixture.grid_points = parse_unsigned(key, value);
  } else if (key == "fwhm") {
    spec.detector.fwhm_s = parse_double(key, value);
  } else if (key == "intensity_scale") {
    spec.detector.intensity_scale = parse_double(key, value);
  } else if (key == "noise_measure") {
    if (value == "fwhm") {
      spec.noise_measure = NoiseMeasure::fwhm;
    } else if (value == "sigma") {
      spec.noise_measure = NoiseMeasure::sigma;
    } else {
      throw ConfigError("config: noise_measure must be fwhm or sigma");
    }
  } else if (key == "n_bits") {
    spec.n_bits = parse_unsigned(key, value);
  } else if (key == "orientation") {
    if (value == "h_dominant_zero") {
      spec.orientation = Orientation::h_dominant_zero;
    } else if (value == "blue_fraction") {
      spec.orientation = Orientation::blue_fraction;
    } else {
      throw ConfigError("config: orientation must be h_dominant_zero or blue_fraction");
    }
  } else if (key == "thresholds_include_instrument") {
    spec.thresholds_include_instrument = parse_bool(key, value);
  } else if (key == "override_gate") {
    spec.override_gate = parse_bool(key, value);
  } else if (key == "parallelism") {
    spec.parallelism = parse_unsigned(key, value);
  } else if (key == "count") {
    count = parse_u64(key, value);
  } else if (key == "significance") {
    significance = parse_double(key, value);
  } else if (key == "format") {
    if (value == "raw") {
      format = OutputFormat::raw;
    } else if (value == "ascii") {
      format = OutputFormat::ascii;
    } else if (value == "both") {
      format = OutputFormat::both;
    } else {
      throw ConfigError("config: format must be raw, ascii or both");
    }
  } else if (key == "output") {
    output = std::string(value);
  } else if (key == "trajectory_runs") {
    trajectory_runs = parse_u64(key, value);
  } else if (key == "density_points") {
    density_points = parse_u64(key, value);
  } else if (key == "bench_count") {
    bench_count = parse_u64(key, value);
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

void apply_override(Config& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  config.set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::load(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    const auto content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    apply_override(*this, content);
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file " + path);
  load(in);
}

void Config::echo(std::ostream& out) const {
  const auto& run = spec.run;
  const auto flags = out.flags();
  out << std::setprecision(17);
  out << "seed=" << run.seed << '\n'
      << "initial_blue=" << run.initial_blue << '\n'
      << "initial_red=" << run.initial_red << '\n'
      << "steps=" << run.steps << '\n'
      << "record_stride=" << run.record_stride << '\n'
      << "first_run_index=" << run.run_index << '\n'
      << "epsilon=" << run.epsilon << '\n'
      << "input=" << to_string(spec.input) << '\n'
      << "lambda_min=" << spec.mixture.lambda_min << '\n'
      << "lambda_max=" << spec.mixture.lambda_max << '\n'
      << "truncation_mass=" << spec.mixture.truncation_mass << '\n'
      << "lambda_grid=" << spec.mixture.grid_points << '\n'
      << "fwhm=" << spec.detector.fwhm_s << '\n'
      << "intensity_scale=" << spec.detector.intensity_scale << '\n'
      << "noise_measure=" << to_string(spec.noise_measure) << '\n'
      << "n_bits=" << spec.n_bits << '\n'
      << "orientation=" << to_string(spec.orientation) << '\n'
      << "thresholds_include_instrument=" << (spec.thresholds_include_instrument ? "true" : "false") << '\n'
      << "override_gate=" << (spec.override_gate ? "true" : "false") << '\n'
      << "parallelism=" << spec.parallelism << '\n'
      << "count=" << count << '\n'
      << "significance=" << significance << '\n'
      << "format=" << (format == OutputFormat::raw ? "raw" : format == OutputFormat::ascii ? "ascii" : "both")
      << '\n'
      << "output=" << output << '\n'
      << "trajectory_runs=" << trajectory_runs << '\n'
      << "density_points=" << density_points << '\n'
      << "bench_count=" << bench_count << '\n';
  out.flags(flags);
}

}  // namespace bosonrng::cli
