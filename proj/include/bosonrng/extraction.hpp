#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bosonrng/detector.hpp"
#include "bosonrng/distributions.hpp"
#include "bosonrng/urn.hpp"

namespace bosonrng {

/// Which coordinate of a reading is compared against the thresholds.
enum class Orientation {
  /// I_V / (I_H + I_V) = 1 - observed_t: a dominant horizontal (blue) mode
  /// lands in the low cells, so with one bit I_H > I_V yields 0.
  h_dominant_zero,
  /// observed_t itself: t below the median yields 0.
  blue_fraction,
};

enum class NoiseMeasure { fwhm, sigma };

enum class InputKind { number_states, coherent };

std::string to_string(Orientation o);
std::string to_string(NoiseMeasure m);
std::string to_string(InputKind k);

struct ExtractionRecipe {
  QuantileTable table;
  Orientation orientation = Orientation::h_dominant_zero;

  unsigned n_bits() const { return table.n_bits; }
};

/// Index of the cell [t_j, t_{j+1}) holding x; a value equal to a threshold
/// belongs to the upper cell. The index is read as an n-bit symbol, most
/// significant bit first.
std::uint32_t extract(double x, const ExtractionRecipe& recipe);

/// Strictly below 2^-n_bits passes.
bool noise_gate(unsigned n_bits, const DetectorModel& model, NoiseMeasure measure = NoiseMeasure::fwhm);

/// Packed bits, most significant bit first within each byte. The final byte
/// is zero-padded.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(unsigned symbol_bits) : symbol_bits_(symbol_bits) {}

  static BitStream from_string(std::string_view bits);  // '0'/'1' characters

  void push_bit(bool bit);
  void push_symbol(std::uint32_t symbol, unsigned n_bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool operator[](std::size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  unsigned pad_bits() const { return static_cast<unsigned>((8 - size_ % 8) % 8); }
  std::size_t count_ones() const;

  unsigned symbol_bits() const { return symbol_bits_; }
  std::vector<std::uint64_t> symbol_counts;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::string metadata_value(std::string_view key) const;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
  unsigned symbol_bits_ = 1;
};

struct PipelineSpec {
  /// Seed, run length, initial populations and epsilon; run_index is the
  /// index of the first run, later runs follow consecutively.
  RunConfig run;
  InputKind input = InputKind::number_states;
  /// Coherent input; its epsilon is taken from run.epsilon.
  MixtureSpec mixture;
  DetectorModel detector;
  unsigned n_bits = 1;
  Orientation orientation = Orientation::h_dominant_zero;
  bool thresholds_include_instrument = true;
  NoiseMeasure noise_measure = NoiseMeasure::fwhm;
  bool override_gate = false;
  unsigned parallelism = 1;
};

/// Law of the extracted coordinate under the spec: beta or Poisson mixture,
/// optionally blurred by the instrument, reflected for h_dominant_zero.
LimitingLaw model_law(const PipelineSpec& spec);

ExtractionRecipe make_recipe(const PipelineSpec& spec);

/// Limiting value of one run, read through the detector, as the coordinate
/// the recipe thresholds. Pure function of (spec, run index).
double observe_run(const PipelineSpec& spec, std::uint64_t run_index);

/// Runs `count` independent urn runs and packs n_bits per run in run order.
/// Throws GateRefused unless the noise gate passes or is overridden.
BitStream pipeline(const PipelineSpec& spec, const ExtractionRecipe& recipe, std::uint64_t count);

void write_raw(std::ostream& out, const BitStream& stream);
/// One '0'/'1' character per bit, no separators, newline-terminated.
void write_ascii(std::ostream& out, const BitStream& stream);
/// `key=value` lines.
void write_metadata(std::ostream& out, const BitStream& stream);

}  // namespace bosonrng
