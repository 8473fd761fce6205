#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace bosonrng {

/// Identifier written into every output's metadata so a stream can be
/// regenerated without this code base.
inline constexpr std::string_view kStreamDerivation = "splitmix64-xoshiro256pp/v1";

/// Independent random channels drawn for one run. Each channel gets its own
/// derived stream so that, for example, enabling detector noise never
/// perturbs the urn draws.
enum class Channel : std::uint64_t {
  urn = 0,
  detector = 1,
  input = 2,
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the stream for (master seed, run index, channel):
///
///   k1 = mix(seed + 0x9E3779B97F4A7C15 * (run_index + 1))
///   k2 = mix(k1 ^ (channel * 0xD1B54A32D192ED03))
///
/// where mix is the SplitMix64 finalizer. The result seeds a xoshiro256++
/// engine whose four state words are the first four SplitMix64 outputs.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t run_index,
                                           Channel channel) {
  const std::uint64_t k1 = splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * (run_index + 1));
  return splitmix64_mix(k1 ^ (static_cast<std::uint64_t>(channel) * 0xD1B54A32D192ED03ULL));
}

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      word = splitmix64_mix(x);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Per-run random source: uniform doubles in [0,1) and standard normals.
/// Both transforms are spelled out here rather than taken from <random>,
/// whose distributions are implementation-defined.
class RunStream {
 public:
  explicit RunStream(std::uint64_t stream_seed) : engine_(stream_seed) {}

  RunStream(std::uint64_t seed, std::uint64_t run_index, Channel channel)
      : engine_(derive_stream_seed(seed, run_index, channel)) {}

  /// Top 53 bits of the next engine output; uniform() is this times 2^-53.
  std::uint64_t bits53() { return engine_() >> 11; }

  /// 53-bit uniform in [0,1).
  double uniform() { return static_cast<double>(bits53()) * 0x1.0p-53; }

  /// Box-Muller, cosine branch only; two uniforms per variate.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Poisson variate by sequential inversion; intended for the small means
  /// of attenuated pulses.
  std::uint64_t poisson(double mean);

  Xoshiro256pp& engine() { return engine_; }

 private:
  Xoshiro256pp engine_;
};

}  // namespace bosonrng
