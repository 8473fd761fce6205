#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bosonrng/rng.hpp"

namespace bosonrng {

/// Photon populations of the two modes. blue is mode 1 (the mode whose
/// fraction is reported as t), red is mode 2.
struct UrnState {
  std::uint64_t blue = 0;
  std::uint64_t red = 0;
  std::uint64_t step = 0;

  std::uint64_t total() const { return blue + red; }
  double fraction() const;  // blue / (blue + red); throws on the empty urn

  friend bool operator==(const UrnState&, const UrnState&) = default;
};

/// Largest accepted value of initial_blue + initial_red + steps.
inline constexpr std::uint64_t kMaxPopulation = std::uint64_t{1} << 62;

struct RunConfig {
  std::uint64_t initial_blue = 0;
  std::uint64_t initial_red = 0;
  std::uint64_t steps = 10'000;
  std::uint64_t record_stride = 1;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  /// Extra coupling of the blue mode. The pseudo-count of blue becomes
  /// (initial_blue + 1)(1 + epsilon), so the limiting law is
  /// Beta((b0 + 1)(1 + epsilon), r0 + 1). Zero gives the plain stimulation law.
  double epsilon = 0.0;

  void validate() const;  // throws ConfigError
};

struct Trajectory {
  UrnState initial;
  std::vector<std::uint64_t> steps;  // step index of each recorded fraction
  std::vector<double> fractions;
  double limiting_value = 0.0;
};

/// Transition probability of the blue mode, (blue + 1) / (blue + red + 2).
double step_probability_blue(const UrnState& state);

/// Generalised law with a blue-coupling excess; see RunConfig::epsilon.
/// `initial_blue` is the population the run started from.
double step_probability_blue(const UrnState& state, double epsilon, std::uint64_t initial_blue);

/// One transition driven by an explicit uniform draw u in [0,1):
/// u < P(blue) adds a blue photon, otherwise a red one.
UrnState advance(const UrnState& state, double u);
UrnState advance(const UrnState& state, RunStream& stream);

/// Final state only; the hot path used by the bit pipeline.
UrnState run_final(const RunConfig& config);

/// Full run. Fractions are recorded after steps stride, 2*stride, ... and
/// always after the final step, giving ceil(steps / stride) entries.
Trajectory run(const RunConfig& config);

/// Same results as calling run() on each config in order, for any
/// parallelism. Failures are rethrown as RunError naming the position.
std::vector<Trajectory> run_batch(std::span<const RunConfig> configs, unsigned parallelism = 1);

/// CSV with header `step,fraction`. A step-0 row is written first when the
/// initial fraction is defined (non-empty urn).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace bosonrng
