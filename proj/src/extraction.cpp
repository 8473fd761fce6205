#include "bosonrng/extraction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bosonrng/error.hpp"
#include "bosonrng/parallel.hpp"

namespace bosonrng {

std::string to_string(Orientation o) {
  return o == Orientation::h_dominant_zero ? "h_dominant_zero" : "blue_fraction";
}

std::string to_string(NoiseMeasure m) { return m == NoiseMeasure::fwhm ? "fwhm" : "sigma"; }

std::string to_string(InputKind k) { return k == InputKind::number_states ? "number_states" : "coherent"; }

std::uint32_t extract(double x, const ExtractionRecipe& recipe) {
  const auto& th = recipe.table.thresholds;
  return static_cast<std::uint32_t>(std::upper_bound(th.begin(), th.end(), x) - th.begin());
}

bool noise_gate(unsigned n_bits, const DetectorModel& model, NoiseMeasure measure) {
  const double level = measure == NoiseMeasure::fwhm ? model.fwhm_s : model.sigma();
  return level < std::ldexp(1.0, -static_cast<int>(n_bits));
}

// ---------------------------------------------------------------------------

BitStream BitStream::from_string(std::string_view bits) {
  BitStream s;
  for (char c : bits) {
    if (c == '0' || c == '1') {
      s.push_bit(c == '1');
    } else {
      throw DomainError("bit string may only contain '0' and '1'");
    }
  }
  return s;
}

void BitStream::push_bit(bool bit) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ % 8));
  ++size_;
}

void BitStream::push_symbol(std::uint32_t symbol, unsigned n_bits) {
  for (unsigned b = n_bits; b-- > 0;) push_bit((symbol >> b) & 1u);
}

std::size_t BitStream::count_ones() const {
  std::size_t ones = 0;
  for (auto byte : bytes_) ones += static_cast<std::size_t>(std::popcount(byte));
  return ones;  // padding bits are zero
}

std::string BitStream::metadata_value(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

// ---------------------------------------------------------------------------

LimitingLaw model_law(const PipelineSpec& spec) {
  LimitingLaw law = [&] {
    if (spec.input == InputKind::coherent) {
      MixtureSpec m = spec.mixture;
      m.epsilon = spec.run.epsilon;
      return LimitingLaw::mixture(m);
    }
    return LimitingLaw::beta(
        BetaParams::from_populations(spec.run.initial_blue, spec.run.initial_red, spec.run.epsilon));
  }();
  if (spec.thresholds_include_instrument && spec.detector.fwhm_s > 0.0) {
    law = law.with_instrument(spec.detector.sigma());
  }
  if (spec.orientation == Orientation::h_dominant_zero) law = law.reflected();
  return law;
}

ExtractionRecipe make_recipe(const PipelineSpec& spec) {
  return ExtractionRecipe{build_quantile_table(model_law(spec), spec.n_bits), spec.orientation};
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class Range>
std::string join(const Range& values) {
  std::ostringstream os;
  os << std::setprecision(17);
  bool first = true;
  for (const auto& v : values) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  return os.str();
}

}  // namespace

double observe_run(const PipelineSpec& spec, std::uint64_t run_index) {
  RunConfig rc = spec.run;
  rc.run_index = run_index;
  if (spec.input == InputKind::coherent) {
    const auto grid = spec.mixture.lambda_grid();
    RunStream input(rc.seed, run_index, Channel::input);
    const auto pick = std::min<std::size_t>(
        grid.size() - 1, static_cast<std::size_t>(input.uniform() * static_cast<double>(grid.size())));
    rc.initial_blue = input.poisson(grid[pick]);
    rc.initial_red = input.poisson(grid[pick]);
  }
  const double t = run_final(rc).fraction();
  RunStream noise(rc.seed, run_index, Channel::detector);
  const double observed = read_out(t, spec.detector, noise).observed_t;
  return spec.orientation == Orientation::h_dominant_zero ? 1.0 - observed : observed;
}

BitStream pipeline(const PipelineSpec& spec, const ExtractionRecipe& recipe, std::uint64_t count) {
  spec.run.validate();
  spec.detector.validate();
  if (spec.input == InputKind::coherent) spec.mixture.validate();
  if (recipe.n_bits() != spec.n_bits || recipe.orientation != spec.orientation) {
    throw ConfigError("pipeline: recipe does not match the pipeline settings");
  }
  const bool gate = noise_gate(spec.n_bits, spec.detector, spec.noise_measure);
  if (!gate && !spec.override_gate) {
    const double level = spec.noise_measure == NoiseMeasure::fwhm ? spec.detector.fwhm_s
                                                                   : spec.detector.sigma();
    throw GateRefused("noise " + to_string(spec.noise_measure) + " " + fmt(level) + " >= 2^-" +
                      std::to_string(spec.n_bits) + " = " +
                      fmt(std::ldexp(1.0, -static_cast<int>(spec.n_bits))) +
                      "; reduce the noise, extract fewer bits, or override the gate");
  }

  std::vector<std::uint32_t> symbols(count);
  parallel_for(count, spec.parallelism, [&](std::size_t i) {
    try {
      symbols[i] = extract(observe_run(spec, spec.run.run_index + i), recipe);
    } catch (const std::exception& e) {
      throw RunError(i, e.what());
    }
  });

  BitStream out(spec.n_bits);
  out.symbol_counts.assign(std::size_t{1} << spec.n_bits, 0);
  for (const auto s : symbols) {
    out.push_symbol(s, spec.n_bits);
    ++out.symbol_counts[s];
  }

  auto& md = out.metadata;
  md.emplace_back("stream_derivation", std::string(kStreamDerivation));
  md.emplace_back("seed", std::to_string(spec.run.seed));
  md.emplace_back("first_run_index", std::to_string(spec.run.run_index));
  md.emplace_back("runs", std::to_string(count));
  md.emplace_back("steps", std::to_string(spec.run.steps));
  md.emplace_back("input", to_string(spec.input));
  if (spec.input == InputKind::number_states) {
    md.emplace_back("initial_blue", std::to_string(spec.run.initial_blue));
    md.emplace_back("initial_red", std::to_string(spec.run.initial_red));
  } else {
    md.emplace_back("lambda_min", fmt(spec.mixture.lambda_min));
    md.emplace_back("lambda_max", fmt(spec.mixture.lambda_max));
    md.emplace_back("lambda_grid", std::to_string(spec.mixture.grid_points));
    md.emplace_back("truncation_mass", fmt(spec.mixture.truncation_mass));
  }
  md.emplace_back("epsilon", fmt(spec.run.epsilon));
  md.emplace_back("fwhm", fmt(spec.detector.fwhm_s));
  md.emplace_back("sigma", fmt(spec.detector.sigma()));
  md.emplace_back("noise_gate", gate ? "pass" : "overridden");
  md.emplace_back("n_bits", std::to_string(spec.n_bits));
  md.emplace_back("bit_order", "msb_first");
  md.emplace_back("orientation", to_string(spec.orientation));
  md.emplace_back("law", recipe.table.law);
  md.emplace_back("thresholds", join(recipe.table.thresholds));
  md.emplace_back("total_bits", std::to_string(out.size()));
  md.emplace_back("pad_bits", std::to_string(out.pad_bits()));
  md.emplace_back("symbol_counts", join(out.symbol_counts));
  return out;
}

void write_raw(std::ostream& out, const BitStream& stream) {
  out.write(reinterpret_cast<const char*>(stream.bytes().data()),
            static_cast<std::streamsize>(stream.bytes().size()));
}

void write_ascii(std::ostream& out, const BitStream& stream) {
  std::string line(stream.size(), '0');
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i]) line[i] = '1';
  }
  out << line << '\n';
}

void write_metadata(std::ostream& out, const BitStream& stream) {
  for (const auto& [k, v] : stream.metadata) out << k << '=' << v << '\n';
}

}  // namespace bosonrng
