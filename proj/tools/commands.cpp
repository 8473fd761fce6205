#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bosonrng/distributions.hpp"
#include "bosonrng/error.hpp"
#include "bosonrng/extraction.hpp"
#include "bosonrng/quantum_oracle.hpp"
#include "bosonrng/stats.hpp"
#include "bosonrng/urn.hpp"

namespace bosonrng::cli {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
  return f;
}

void finish(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw std::ios_base::failure("write failed for " + path);
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer, bool binary = false) {
  auto f = open_out(path, binary);
  writer(f);
  finish(f, path);
}

}  // namespace

int cmd_generate(const Config& config, std::ostream& out) {
  const auto recipe = make_recipe(config.spec);
  const auto stream = pipeline(config.spec, recipe, config.count);
  const auto& base = config.output;
  if (config.format != OutputFormat::ascii) {
    write_file(base + ".bin", [&](std::ostream& f) { write_raw(f, stream); }, true);
  }
  if (config.format != OutputFormat::raw) {
    write_file(base + ".txt", [&](std::ostream& f) { write_ascii(f, stream); });
  }
  write_file(base + ".meta", [&](std::ostream& f) { write_metadata(f, stream); });
  write_file(base + ".config", [&](std::ostream& f) { config.echo(f); });
  write_file(base + ".thresholds", [&](std::ostream& f) { write_quantile_table(f, recipe.table); });

  out << "generated " << stream.size() << " bits from " << config.count << " runs -> " << base << ".*\n";
  out << "thresholds:";
  for (double t : recipe.table.thresholds) out << ' ' << std::setprecision(12) << t;
  out << "\n--- effective config ---\n";
  config.echo(out);
  return kOk;
}

int cmd_trajectories(const Config& config, std::ostream& out) {
  if (config.trajectory_runs == 0) throw ConfigError("trajectory_runs must be positive");
  std::vector<RunConfig> runs(config.trajectory_runs, config.spec.run);
  for (std::size_t i = 0; i < runs.size(); ++i) runs[i].run_index = config.spec.run.run_index + i;
  const auto trajectories = run_batch(runs, config.spec.parallelism);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const std::string path = config.output + "_run" + std::to_string(i) + ".csv";
    write_file(path, [&](std::ostream& f) { write_trajectory_csv(f, trajectories[i]); });
    out << path << " limiting_value=" << std::setprecision(10) << trajectories[i].limiting_value << '\n';
  }
  write_file(config.output + "_trajectories.config", [&](std::ostream& f) { config.echo(f); });
  return kOk;
}

int cmd_densities(const Config& config, std::ostream& out) {
  PipelineSpec spec = config.spec;
  spec.orientation = Orientation::blue_fraction;
  const auto law = model_law(spec);
  const std::string csv = config.output + "_density.csv";
  write_file(csv, [&](std::ostream& f) { write_density_csv(f, law, config.density_points); });
  const auto table = build_quantile_table(law, spec.n_bits);
  const std::string thresholds = config.output + "_density.thresholds";
  write_file(thresholds, [&](std::ostream& f) { write_quantile_table(f, table); });
  out << "law " << law.describe() << "\n" << csv << "\n" << thresholds << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

namespace {

// Closed-form beta-binomial with integer shapes (a, b) = (b0 + 1, r0 + 1):
// C(k, j) a^(j) b^(k-j) / (a+b)^(k), x^(n) the rising factorial.
oracle::Rational beta_binomial(unsigned k, unsigned j, std::uint64_t a, std::uint64_t b) {
  auto rising = [](std::uint64_t x, unsigned n) {
    oracle::Integer r = 1;
    for (unsigned i = 0; i < n; ++i) r *= oracle::Integer(x + i);
    return r;
  };
  oracle::Integer binom = 1;
  for (unsigned i = 0; i < j; ++i) binom = binom * (k - i) / (i + 1);
  return oracle::Rational(binom * rising(a, j) * rising(b, k - j), rising(a + b, k));
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

}  // namespace

std::vector<VerifyCheck> run_verification(const VerifyOptions& options) {
  std::vector<VerifyCheck> checks;
  const oracle::EvolveOptions evolve{options.inject_fault ? 1e-6 : 0.0};

  {
    double worst_gap = 0.0;
    double worst_norm = 0.0;
    for (std::uint64_t n0 = 0; n0 <= 4; ++n0) {
      for (std::uint64_t m0 = 0; n0 + m0 <= 4; ++m0) {
        for (unsigned k = 0; k <= 8; ++k) {
          const auto state = oracle::evolve_amplitudes(n0, m0, k, evolve);
          worst_norm = std::max(worst_norm, std::abs(state.norm_squared() - 1.0));
          worst_gap = std::max(worst_gap, oracle::equivalence_gap(oracle::marginal_counts(state),
                                                                  oracle::enumerate_paths(n0, m0, k)));
        }
      }
    }
    checks.push_back({"amplitude_normalization", worst_norm <= 1e-12, "max |norm-1| = " + sci(worst_norm)});
    checks.push_back({"quantum_classical_equivalence", worst_gap <= 1e-12,
                      "n0+m0<=4, k<=8, max gap = " + sci(worst_gap)});
  }
  {
    bool ok = true;
    for (std::uint64_t b0 = 0; b0 <= 3; ++b0) {
      for (std::uint64_t r0 = 0; r0 <= 3; ++r0) {
        for (unsigned k = 0; k <= 10; ++k) {
          const auto dist = oracle::enumerate_paths(b0, r0, k);
          ok = ok && dist.total() == 1;
          for (unsigned j = 0; j <= k; ++j) {
            const auto it = dist.by_blue_count.find(j);
            ok = ok && it != dist.by_blue_count.end() && it->second == beta_binomial(k, j, b0 + 1, r0 + 1);
          }
        }
      }
    }
    checks.push_back({"enumeration_matches_beta_binomial", ok, "exact rationals, b0,r0<=3, k<=10"});
  }
  {
    const auto dist = oracle::enumerate_paths(3, 3, 0);
    const auto state = oracle::evolve_amplitudes(3, 3, 0, evolve);
    const bool ok = dist.by_blue_count.size() == 1 && dist.by_blue_count.begin()->second == 1 &&
                    state.terms.size() == 1 && state.terms[0].amplitude == 1.0;
    checks.push_back({"zero_step_identity", ok, "(3,3), k=0"});
  }
  {
    double worst = 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (double a : {0.5, 1.0, 2.5, 4.0, 50.0}) {
      for (double b : {0.5, 1.0, 4.0, 17.0, 50.0}) {
        // Upper half through the mirrored law so both endpoint singularities
        // sit at the origin of their integration range.
        const BetaParams p{a, b, 0.0};
        const BetaParams mirrored{b, a, 0.0};
        const double mass =
            integrator.integrate([&](double t) { return beta_pdf(t, p); }, 0.0, 0.5) +
            integrator.integrate([&](double u) { return beta_pdf(u, mirrored); }, 0.0, 0.5);
        worst = std::max(worst, std::abs(mass - 1.0));
      }
    }
    checks.push_back({"beta_pdf_normalization", worst <= 1e-9, "max |mass-1| = " + sci(worst)});
  }
  {
    double worst = 0.0;
    for (double a : {0.5, 1.0, 1.2, 4.0, 50.0}) {
      for (double b : {0.5, 1.0, 4.0, 50.0}) {
        const BetaParams p{a, b, 0.0};
        for (double xi : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
          worst = std::max(worst, std::abs(beta_cdf(beta_quantile(xi, p), p) - xi));
        }
      }
    }
    checks.push_back({"quantile_round_trip", worst <= 1e-9, "max |cdf(q(xi))-xi| = " + sci(worst)});
  }
  {
    const MixtureSpec spec{0.5, 2.0, 1e-12, 11, 0.0};
    const Mixture mixture(spec);
    const double weight_error = std::abs(mixture.weight_sum() - 1.0);
    const double median_error = std::abs(mixture.quantile(0.5) - 0.5);
    checks.push_back({"mixture_normalization", weight_error <= 1e-12, "|sum w - 1| = " + sci(weight_error)});
    checks.push_back({"mixture_symmetric_median", median_error <= 1e-8, "|median-0.5| = " + sci(median_error)});
  }
  return checks;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  const auto checks = run_verification(options);
  bool all = true;
  for (const auto& c : checks) {
    out << std::left << std::setw(36) << c.name << (c.pass ? "PASS  " : "FAIL  ") << c.detail << '\n';
    all = all && c.pass;
  }
  out << (all ? "all checks passed\n" : "verification FAILED\n");
  return all ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// battery

namespace {

BitStream load_stream(const BatteryInput& input) {
  std::ifstream f(input.path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + input.path);
  const std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (input.ascii) {
    BitStream s;
    for (char c : content) {
      if (c == '0' || c == '1') {
        s.push_bit(c == '1');
      } else if (c != '\n' && c != '\r' && c != ' ') {
        throw DomainError("ascii bitstream contains '" + std::string(1, c) + "'");
      }
      if (input.bits != 0 && s.size() == input.bits) break;
    }
    return s;
  }
  std::uint64_t bits = input.bits;
  if (bits == 0) {
    const auto meta = std::filesystem::path(input.path).replace_extension(".meta");
    std::ifstream m(meta);
    std::string line;
    while (m && std::getline(m, line)) {
      if (line.rfind("total_bits=", 0) == 0) bits = std::stoull(line.substr(11));
    }
  }
  if (bits == 0 || bits > content.size() * 8) bits = content.size() * 8;
  BitStream s;
  for (std::uint64_t i = 0; i < bits; ++i) {
    s.push_bit((static_cast<unsigned char>(content[i >> 3]) >> (7 - (i & 7))) & 1u);
  }
  return s;
}

}  // namespace

int cmd_battery(const Config& config, const BatteryInput& input, std::ostream& out) {
  const BitStream stream = input.path.empty()
                               ? pipeline(config.spec, make_recipe(config.spec), config.count)
                               : load_stream(input);
  const auto reports = stats::run_battery(stream, config.significance);
  stats::write_report_table(out, reports);
  out << '\n';
  stats::write_report_records(out, reports);
  for (unsigned k : {1u, 8u}) {
    try {
      const auto e = stats::shannon_entropy(stream, k);
      out << "entropy block_bits=" << k << " plugin=" << std::setprecision(10) << e.plugin_bits
          << " miller_madow=" << e.miller_madow_bits << " corrected=" << e.corrected_bits()
          << " blocks=" << e.blocks << '\n';
    } catch (const InsufficientData&) {
    }
  }
  const bool failed = std::any_of(reports.begin(), reports.end(),
                                  [](const auto& r) { return r.outcome == stats::Outcome::fail; });
  return failed ? kBatteryFailed : kOk;
}

// ---------------------------------------------------------------------------
// bench

std::vector<BenchRow> run_bench(const Config& config, const std::vector<std::uint64_t>& steps,
                                const std::vector<unsigned>& parallelism) {
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  std::vector<BenchRow> rows;
  for (const auto n_steps : steps) {
    PipelineSpec spec = config.spec;
    spec.run.steps = n_steps;
    const auto recipe = make_recipe(spec);
    const std::uint64_t runs = config.bench_count;

    // Stage breakdown on one thread.
    std::vector<double> limits(runs);
    auto t0 = Clock::now();
    for (std::uint64_t i = 0; i < runs; ++i) {
      RunConfig rc = spec.run;
      rc.run_index = spec.run.run_index + i;
      limits[i] = run_final(rc).fraction();
    }
    const double urn_seconds = seconds_since(t0);
    t0 = Clock::now();
    std::uint64_t sink = 0;
    for (std::uint64_t i = 0; i < runs; ++i) {
      RunStream noise(spec.run.seed, spec.run.run_index + i, Channel::detector);
      const double observed = read_out(limits[i], spec.detector, noise).observed_t;
      sink += extract(spec.orientation == Orientation::h_dominant_zero ? 1.0 - observed : observed, recipe);
    }
    const double readout_seconds = seconds_since(t0);
    [[maybe_unused]] volatile std::uint64_t keep = sink;

    std::vector<std::uint8_t> reference;
    bool first = true;
    for (const unsigned p : parallelism) {
      spec.parallelism = p;
      t0 = Clock::now();
      const auto stream = pipeline(spec, recipe, runs);
      BenchRow row;
      row.seconds = seconds_since(t0);
      row.steps = n_steps;
      row.parallelism = p;
      row.runs = runs;
      row.bits = stream.size();
      row.urn_seconds = urn_seconds;
      row.readout_seconds = readout_seconds;
      if (first) {
        reference = stream.bytes();
        first = false;
      }
      row.identical_to_serial = stream.bytes() == reference;
      rows.push_back(row);
    }
  }
  return rows;
}

int cmd_bench(const Config& config, std::ostream& out) {
  const auto rows = run_bench(config, {1'000, 10'000}, {1, 4});
  out << std::left << std::setw(8) << "steps" << std::setw(6) << "par" << std::right << std::setw(10)
      << "runs" << std::setw(10) << "bits" << std::setw(12) << "seconds" << std::setw(14) << "bits/s"
      << std::setw(12) << "urn_s" << std::setw(12) << "readout_s" << std::setw(11) << "identical" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(8) << r.steps << std::setw(6) << r.parallelism << std::right
        << std::setw(10) << r.runs << std::setw(10) << r.bits << std::setw(12) << std::setprecision(4)
        << r.seconds << std::setw(14) << std::setprecision(6) << r.bits_per_second() << std::setw(12)
        << std::setprecision(4) << r.urn_seconds << std::setw(12) << r.readout_seconds << std::setw(11)
        << (r.identical_to_serial ? "yes" : "NO") << '\n';
  }
  if (rows.size() >= 3 && rows[0].bits_per_second() > 0.0 && rows[2].bits_per_second() > 0.0) {
    out << "throughput ratio steps=1000 / steps=10000 (parallelism "
        << rows[0].parallelism << "): " << std::setprecision(4)
        << rows[0].bits_per_second() / rows[2].bits_per_second() << '\n';
  }
  out << "note: simulator throughput only; not a hardware bit rate\n";
  const bool identical = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.identical_to_serial; });
  return identical ? kOk : kInternalError;
}

}  // namespace bosonrng::cli
