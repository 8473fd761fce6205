#include "bosonrng/urn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "bosonrng/error.hpp"
#include "bosonrng/parallel.hpp"

namespace bosonrng {

double UrnState::fraction() const {
  if (total() == 0) throw DomainError("fraction of an empty urn is undefined");
  return static_cast<double>(blue) / static_cast<double>(total());
}

void RunConfig::validate() const {
  if (steps == 0) throw ConfigError("run length must be at least one step");
  if (record_stride == 0) throw ConfigError("record stride must be at least one");
  if (!(epsilon > -1.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be finite and greater than -1");
  }
  if (initial_blue >= kMaxPopulation || initial_red >= kMaxPopulation - initial_blue ||
      steps > kMaxPopulation - initial_blue - initial_red) {
    throw ConfigError("initial populations plus run length exceed 2^62");
  }
  if (epsilon != 0.0 && initial_blue + initial_red + steps > (std::uint64_t{1} << 53)) {
    throw ConfigError("runs with epsilon != 0 are limited to 2^53 photons");
  }
}

double step_probability_blue(const UrnState& state) {
  return (static_cast<double>(state.blue) + 1.0) / (static_cast<double>(state.total()) + 2.0);
}

double step_probability_blue(const UrnState& state, double epsilon, std::uint64_t initial_blue) {
  const double extra = epsilon * (static_cast<double>(initial_blue) + 1.0);
  return (static_cast<double>(state.blue) + (1.0 + extra)) /
         (static_cast<double>(state.total()) + (2.0 + extra));
}

UrnState advance(const UrnState& state, double u) {
  UrnState next = state;
  if (u < step_probability_blue(state)) {
    ++next.blue;
  } else {
    ++next.red;
  }
  ++next.step;
  return next;
}

UrnState advance(const UrnState& state, RunStream& stream) { return advance(state, stream.uniform()); }

namespace {

// Runs `steps` transitions and calls `record(state)` after each recorded
// step. With draw u = x / 2^53 the branch u < P(blue) is evaluated without
// rounding:
//   epsilon == 0:  x * (total + 2) < (blue + 1) * 2^53 in 128-bit integers;
//   otherwise:     u * (total + 2 + extra) - (1 + extra) < blue in doubles,
//                  exact up to one rounding of the product.
// Both loops are kept branch-free.
template <class Recorder>
UrnState simulate(const RunConfig& config, Recorder&& record) {
  config.validate();
  RunStream stream(config.seed, config.run_index, Channel::urn);
  const std::uint64_t initial_total = config.initial_blue + config.initial_red;
  const std::uint64_t stride = config.record_stride;
  std::uint64_t blue = config.initial_blue;
  std::uint64_t i = 0;
  std::uint64_t next_record = std::min(stride, config.steps);

  if (config.epsilon == 0.0) {
    using u128 = unsigned __int128;
    while (i < config.steps) {
      for (; i < next_record; ++i) {
        const u128 lhs = static_cast<u128>(stream.bits53()) * (initial_total + i + 2);
        blue += lhs < (static_cast<u128>(blue + 1) << 53) ? 1 : 0;
      }
      record(UrnState{blue, initial_total + i - blue, i});
      next_record = std::min(config.steps, next_record + stride);
    }
  } else {
    const double extra = config.epsilon * (static_cast<double>(config.initial_blue) + 1.0);
    const double blue_offset = 1.0 + extra;
    const double total_offset = 2.0 + extra;
    double blue_d = static_cast<double>(blue);
    double total_d = static_cast<double>(initial_total);
    constexpr std::uint64_t one = std::bit_cast<std::uint64_t>(1.0);
    while (i < config.steps) {
      for (; i < next_record; ++i) {
        const double lhs = stream.uniform() * (total_d + total_offset) - blue_offset;
        const std::uint64_t mask = 0 - static_cast<std::uint64_t>(lhs < blue_d);
        blue_d += std::bit_cast<double>(mask & one);
        total_d += 1.0;
      }
      blue = static_cast<std::uint64_t>(blue_d);
      record(UrnState{blue, initial_total + i - blue, i});
      next_record = std::min(config.steps, next_record + stride);
    }
  }
  return UrnState{blue, initial_total + config.steps - blue, config.steps};
}

}  // namespace

UrnState run_final(const RunConfig& config) {
  RunConfig unrecorded = config;
  unrecorded.record_stride = std::max<std::uint64_t>(config.steps, 1);
  return simulate(unrecorded, [](const UrnState&) {});
}

Trajectory run(const RunConfig& config) {
  Trajectory out;
  out.initial = UrnState{config.initial_blue, config.initial_red, 0};
  const std::uint64_t records = config.record_stride == 0
                                    ? 0
                                    : (config.steps + config.record_stride - 1) / config.record_stride;
  out.steps.reserve(records);
  out.fractions.reserve(records);
  simulate(config, [&](const UrnState& s) {
    out.steps.push_back(s.step);
    out.fractions.push_back(s.fraction());
  });
  out.limiting_value = out.fractions.back();
  return out;
}

std::vector<Trajectory> run_batch(std::span<const RunConfig> configs, unsigned parallelism) {
  if (configs.empty()) throw ConfigError("run_batch: empty batch");
  std::vector<Trajectory> out(configs.size());
  parallel_for(configs.size(), parallelism, [&](std::size_t i) {
    try {
      out[i] = run(configs[i]);
    } catch (const std::exception& e) {
      throw RunError(i, e.what());
    }
  });
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "step,fraction\n";
  out << std::setprecision(17);
  if (trajectory.initial.total() > 0) out << 0 << ',' << trajectory.initial.fraction() << '\n';
  for (std::size_t i = 0; i < trajectory.fractions.size(); ++i) {
    out << trajectory.steps[i] << ',' << trajectory.fractions[i] << '\n';
  }
}

}  // namespace bosonrng
