#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bosonrng/error.hpp"
#include "bosonrng/extraction.hpp"

using namespace bosonrng;

namespace {

ExtractionRecipe recipe_for(const BetaParams& p, unsigned n, Orientation o = Orientation::blue_fraction) {
  auto law = LimitingLaw::beta(p);
  if (o == Orientation::h_dominant_zero) law = law.reflected();
  return {build_quantile_table(law, n), o};
}

PipelineSpec small_spec() {
  PipelineSpec spec;
  spec.run.steps = 1000;
  spec.run.seed = 31;
  return spec;
}

}  // namespace

TEST_CASE("symbol extraction") {
  const auto uniform2 = recipe_for({1, 1, 0}, 2);
  CHECK(extract(0.30, uniform2) == 0b01);
  CHECK(extract(0.25, uniform2) == 0b01);
  CHECK(extract(0.0, uniform2) == 0b00);
  CHECK(extract(0.8, uniform2) == 0b11);
  CHECK(extract(1.0, uniform2) == 0b11);
  CHECK(extract(0.70, recipe_for({2, 1, 0}, 1)) == 0);
  CHECK(extract(0.71, recipe_for({2, 1, 0}, 1)) == 1);
}

TEST_CASE("noise gate") {
  CHECK(noise_gate(2, {0.2, 1.0}));
  CHECK_FALSE(noise_gate(2, {0.25, 1.0}));
  CHECK_FALSE(noise_gate(10, {0.01, 1.0}));
  CHECK_FALSE(noise_gate(4, {0.2, 1.0}));
  CHECK(noise_gate(4, {0.0, 1.0}));
  // Measured as sigma the same FWHM is smaller by 2.3548.
  CHECK(noise_gate(2, {0.5, 1.0}, NoiseMeasure::sigma));
}

TEST_CASE("bit stream packing") {
  BitStream s(2);
  s.push_symbol(0b01, 2);
  s.push_symbol(0b11, 2);
  s.push_symbol(0b10, 2);
  CHECK(s.size() == 6);
  CHECK(s.bytes() == std::vector<std::uint8_t>{0b01111000});
  CHECK(s.pad_bits() == 2);
  CHECK(s.count_ones() == 4);
  CHECK(s[0] == false);
  CHECK(s[1] == true);
  const auto from = BitStream::from_string("011110");
  CHECK(from.bytes() == s.bytes());
  CHECK(BitStream::from_string("10000000").pad_bits() == 0);
  CHECK_THROWS_AS(BitStream::from_string("01x"), DomainError);

  std::ostringstream raw, ascii;
  write_raw(raw, s);
  write_ascii(ascii, s);
  CHECK(raw.str() == std::string(1, static_cast<char>(0b01111000)));
  CHECK(ascii.str() == "011110\n");
}

TEST_CASE("orientation conventions") {
  // h_dominant_zero: a blue-dominant reading (I_H > I_V) gives 0.
  auto spec = small_spec();
  spec.orientation = Orientation::h_dominant_zero;
  const auto recipe = make_recipe(spec);
  CHECK(extract(1.0 - 0.8, recipe) == 0);
  CHECK(extract(1.0 - 0.2, recipe) == 1);
  spec.orientation = Orientation::blue_fraction;
  const auto blue = make_recipe(spec);
  CHECK(extract(0.8, blue) == 1);

  // Bits under the two orientations are complements for a symmetric law.
  spec.run.initial_blue = spec.run.initial_red = 2;
  const auto b = pipeline(spec, make_recipe(spec), 200);
  spec.orientation = Orientation::h_dominant_zero;
  const auto h = pipeline(spec, make_recipe(spec), 200);
  for (std::size_t i = 0; i < 200; ++i) CHECK(b[i] != h[i]);
}

TEST_CASE("empty pipeline") {
  auto spec = small_spec();
  const auto s = pipeline(spec, make_recipe(spec), 0);
  CHECK(s.empty());
  CHECK(s.metadata_value("total_bits") == "0");
  CHECK(s.metadata_value("stream_derivation") == "splitmix64-xoshiro256pp/v1");
  CHECK(s.metadata_value("bit_order") == "msb_first");
}

TEST_CASE("pipeline metadata and bit counts") {
  auto spec = small_spec();
  spec.n_bits = 3;
  const auto s = pipeline(spec, make_recipe(spec), 11);
  CHECK(s.size() == 33);
  CHECK(s.metadata_value("pad_bits") == "7");
  CHECK(s.metadata_value("n_bits") == "3");
  CHECK(s.metadata_value("runs") == "11");
  CHECK(s.metadata_value("noise_gate") == "pass");
  std::uint64_t total = 0;
  for (auto c : s.symbol_counts) total += c;
  CHECK(total == 11);
  std::ostringstream md;
  write_metadata(md, s);
  CHECK(md.str().find("seed=31\n") != std::string::npos);
}

TEST_CASE("pipeline symbols are the extracted observations") {
  auto spec = small_spec();
  spec.n_bits = 2;
  spec.detector.fwhm_s = 0.05;
  const auto recipe = make_recipe(spec);
  const auto s = pipeline(spec, recipe, 50);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto sym = extract(observe_run(spec, i), recipe);
    CHECK(s[2 * i] == static_cast<bool>(sym & 2u));
    CHECK(s[2 * i + 1] == static_cast<bool>(sym & 1u));
  }
}

TEST_CASE("noise does not perturb the urn draws") {
  auto spec = small_spec();
  spec.orientation = Orientation::blue_fraction;
  const double clean = observe_run(spec, 4);
  spec.detector.fwhm_s = 0.01;
  const double noisy = observe_run(spec, 4);
  CHECK(std::abs(noisy - clean) < 0.1);
  CHECK(noisy != clean);
}

TEST_CASE("gate refusal and override") {
  auto spec = small_spec();
  spec.n_bits = 4;
  spec.detector.fwhm_s = 0.2;
  const auto recipe = make_recipe(spec);
  try {
    pipeline(spec, recipe, 10);
    FAIL("expected GateRefused");
  } catch (const GateRefused& e) {
    CHECK(std::string(e.what()).find("0.2") != std::string::npos);
    CHECK(std::string(e.what()).find("2^-4") != std::string::npos);
  }
  spec.override_gate = true;
  const auto s = pipeline(spec, recipe, 10);
  CHECK(s.metadata_value("noise_gate") == "overridden");
}

TEST_CASE("recipe mismatch is rejected") {
  auto spec = small_spec();
  const auto recipe = make_recipe(spec);
  spec.n_bits = 2;
  CHECK_THROWS_AS(pipeline(spec, recipe, 1), ConfigError);
}

TEST_CASE("debiased pipeline is balanced") {
  auto spec = small_spec();
  spec.run.epsilon = 0.2;
  const std::uint64_t n = 100'000;
  const auto s = pipeline(spec, make_recipe(spec), n);
  const double zeros = 1.0 - static_cast<double>(s.count_ones()) / n;
  CHECK(std::abs(zeros - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("two-bit pipeline symbol frequencies") {
  auto spec = small_spec();
  spec.n_bits = 2;
  const std::uint64_t n = 100'000;
  const auto s = pipeline(spec, make_recipe(spec), n);
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  for (auto c : s.symbol_counts) CHECK(std::abs(c / static_cast<double>(n) - 0.25) <= 3.0 * sigma);
}

TEST_CASE("coherent input pipeline") {
  auto spec = small_spec();
  spec.input = InputKind::coherent;
  spec.mixture.lambda_min = 1.0;
  spec.mixture.lambda_max = 3.0;
  const std::uint64_t n = 40'000;
  const auto s = pipeline(spec, make_recipe(spec), n);
  CHECK(s.metadata_value("input") == "coherent");
  CHECK(std::abs(static_cast<double>(s.count_ones()) / n - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("parallel pipeline equals serial") {
  auto spec = small_spec();
  spec.n_bits = 3;
  const auto recipe = make_recipe(spec);
  const auto serial = pipeline(spec, recipe, 3000);
  spec.parallelism = 4;
  CHECK(pipeline(spec, recipe, 3000).bytes() == serial.bytes());
}
