#include "bosonrng/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "bosonrng/error.hpp"

namespace bosonrng::stats {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::skipped:
      return "skipped";
  }
  return "?";
}

namespace {

TestReport decided(std::string name, double statistic, double p, std::size_t n, double significance,
                   std::string details = {}) {
  TestReport r;
  r.test_name = std::move(name);
  r.statistic = statistic;
  r.p_value = std::clamp(p, 0.0, 1.0);
  r.sample_size = n;
  r.significance = significance;
  r.outcome = r.p_value >= significance ? Outcome::pass : Outcome::fail;
  r.details = std::move(details);
  return r;
}

std::vector<std::uint64_t> block_counts(const BitStream& stream, unsigned block_bits) {
  std::vector<std::uint64_t> counts(std::size_t{1} << block_bits, 0);
  const std::size_t blocks = stream.size() / block_bits;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::uint32_t v = 0;
    for (unsigned k = 0; k < block_bits; ++k) v = (v << 1) | (stream[pos++] ? 1u : 0u);
    ++counts[v];
  }
  return counts;
}

void check_block_data(const BitStream& stream, unsigned block_bits, const char* who) {
  if (block_bits == 0 || block_bits > 20) throw DomainError(std::string(who) + ": block_bits in [1,20]");
  const std::size_t needed = std::size_t{50} << block_bits;
  if (stream.size() / block_bits < needed) {
    throw InsufficientData(std::string(who) + ": need at least " + std::to_string(needed) +
                           " blocks of " + std::to_string(block_bits) + " bits");
  }
}

}  // namespace

double chi2_survival(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // 1 - sqrt(2 pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)), fast for small x
    const double f = -std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp(f * (2 * k - 1) * (2 * k - 1));
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestReport monobit_test(const BitStream& stream, double significance) {
  const std::size_t n = stream.size();
  if (n < 100) throw InsufficientData("monobit: need at least 100 bits");
  const double ones = static_cast<double>(stream.count_ones());
  const double s = std::abs(2.0 * ones - static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
  std::ostringstream details;
  details << "ones_fraction=" << std::setprecision(8) << ones / static_cast<double>(n);
  return decided("monobit", s, std::erfc(s / std::numbers::sqrt2), n, significance, details.str());
}

TestReport runs_test(const BitStream& stream, double significance) {
  const std::size_t n = stream.size();
  if (n < 100) throw InsufficientData("runs: need at least 100 bits");
  const double nd = static_cast<double>(n);
  const double pi = static_cast<double>(stream.count_ones()) / nd;
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(nd)) {
    TestReport r;
    r.test_name = "runs";
    r.sample_size = n;
    r.significance = significance;
    r.outcome = Outcome::skipped;
    r.details = "ones fraction too far from 1/2 for the runs test";
    return r;
  }
  std::size_t runs = 1;
  for (std::size_t i = 1; i < n; ++i) runs += stream[i] != stream[i - 1] ? 1 : 0;
  const double v = static_cast<double>(runs);
  const double q = pi * (1.0 - pi);
  const double z = std::abs(v - 2.0 * nd * q) / (2.0 * std::sqrt(2.0 * nd) * q);
  std::ostringstream details;
  details << "runs=" << runs;
  return decided("runs", v, std::erfc(z), n, significance, details.str());
}

TestReport serial_chi2_test(const BitStream& stream, unsigned block_bits, double significance) {
  check_block_data(stream, block_bits, "serial_chi2");
  const auto counts = block_counts(stream, block_bits);
  const double blocks = static_cast<double>(stream.size() / block_bits);
  const double expected = blocks / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  std::ostringstream details;
  details << "block_bits=" << block_bits << " dof=" << counts.size() - 1;
  return decided("serial_chi2_" + std::to_string(block_bits), chi2, chi2_survival(chi2, dof),
                 static_cast<std::size_t>(blocks), significance, details.str());
}

EntropyEstimate shannon_entropy(const BitStream& stream, unsigned block_bits) {
  check_block_data(stream, block_bits, "shannon_entropy");
  const auto counts = block_counts(stream, block_bits);
  EntropyEstimate e;
  e.blocks = stream.size() / block_bits;
  const double n = static_cast<double>(e.blocks);
  std::size_t occupied = 0;
  for (auto c : counts) {
    if (c == 0) continue;
    ++occupied;
    const double p = static_cast<double>(c) / n;
    e.plugin_bits -= p * std::log2(p);
  }
  e.miller_madow_bits = (static_cast<double>(occupied) - 1.0) / (2.0 * n * std::numbers::ln2);
  return e;
}

TestReport ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                   const std::string& name, double significance,
                   const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw InsufficientData("ks: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double x = sorted[i];
    const double f = cdf(x);
    const double f_left = cdf_left ? cdf_left(x) : f;
    d = std::max({d, std::abs(static_cast<double>(j) / n - f),
                  std::abs(static_cast<double>(i) / n - f_left)});
    i = j;
  }
  const double sqrt_n = std::sqrt(n);
  const double p = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return decided(name, d, p, sorted.size(), significance);
}

GofResult limiting_value_gof(std::span<const double> samples, const LimitingLaw& model,
                             double significance) {
  constexpr int kCells = 20;
  if (samples.size() < 1000) throw InsufficientData("limiting_value_gof: need at least 1000 samples");
  std::vector<double> edges;
  for (int j = 1; j < kCells; ++j) edges.push_back(model.quantile(static_cast<double>(j) / kCells));
  std::vector<double> counts(kCells, 0.0);
  for (double x : samples) {
    counts[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin())] += 1.0;
  }
  const double expected = static_cast<double>(samples.size()) / kCells;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  GofResult out;
  out.chi2 = decided("gof_chi2_20", chi2, chi2_survival(chi2, kCells - 1), samples.size(), significance,
                     "model=" + model.describe());
  out.ks = ks_test(samples, [&](double x) { return model.cdf(x); }, "gof_ks", significance,
                   [&](double x) { return model.cdf_left(x); });
  out.ks.details = "model=" + model.describe();
  return out;
}

std::vector<TestReport> run_battery(const BitStream& stream, double significance) {
  std::vector<TestReport> out;
  out.push_back(monobit_test(stream, significance));
  out.push_back(runs_test(stream, significance));
  for (unsigned k : {2u, 8u}) {
    try {
      out.push_back(serial_chi2_test(stream, k, significance));
    } catch (const InsufficientData& e) {
      TestReport r;
      r.test_name = "serial_chi2_" + std::to_string(k);
      r.sample_size = stream.size() / k;
      r.significance = significance;
      r.details = e.what();
      out.push_back(r);
    }
  }
  return out;
}

void write_report_table(std::ostream& out, const std::vector<TestReport>& reports) {
  out << std::left << std::setw(16) << "test" << std::right << std::setw(16) << "statistic"
      << std::setw(14) << "p_value" << std::setw(12) << "n" << std::setw(9) << "result" << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(16) << r.test_name << std::right << std::setw(16)
        << std::setprecision(8) << r.statistic << std::setw(14) << std::setprecision(6) << r.p_value
        << std::setw(12) << r.sample_size << std::setw(9) << to_string(r.outcome) << '\n';
  }
}

void write_report_records(std::ostream& out, const std::vector<TestReport>& reports) {
  for (const auto& r : reports) {
    out << "test=" << r.test_name << " statistic=" << std::setprecision(17) << r.statistic
        << " p_value=" << r.p_value << " n=" << r.sample_size << " significance=" << r.significance
        << " result=" << to_string(r.outcome);
    if (!r.details.empty()) out << " details=\"" << r.details << '"';
    out << '\n';
  }
}

}  // namespace bosonrng::stats
