#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bosonrng/distributions.hpp"
#include "bosonrng/extraction.hpp"

namespace bosonrng::stats {

inline constexpr double kDefaultSignificance = 0.01;

enum class Outcome { pass, fail, skipped };

struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t sample_size = 0;
  double significance = kDefaultSignificance;
  Outcome outcome = Outcome::skipped;
  std::string details;

  bool passed() const { return outcome == Outcome::pass; }
};

std::string to_string(Outcome o);

/// Frequency test on the ones count, two-sided normal approximation.
TestReport monobit_test(const BitStream& stream, double significance = kDefaultSignificance);

/// Total number of runs against 2 n p (1 - p). Reported as skipped when the
/// ones fraction is 2/sqrt(n) or more away from 1/2.
TestReport runs_test(const BitStream& stream, double significance = kDefaultSignificance);

/// Chi-square of non-overlapping block_bits-wide block frequencies against
/// uniform. Needs at least 50 * 2^block_bits blocks.
TestReport serial_chi2_test(const BitStream& stream, unsigned block_bits,
                            double significance = kDefaultSignificance);

struct EntropyEstimate {
  double plugin_bits = 0.0;       // bits per block
  double miller_madow_bits = 0.0; // (K - 1) / (2 N ln 2), K = occupied cells
  std::size_t blocks = 0;

  double corrected_bits() const { return plugin_bits + miller_madow_bits; }
};

EntropyEstimate shannon_entropy(const BitStream& stream, unsigned block_bits);

/// One-sample Kolmogorov-Smirnov test; p-value from the asymptotic
/// Kolmogorov distribution with Stephens' small-sample correction. Tied
/// samples are handled as a jump of the empirical CDF; `cdf_left` gives
/// P(X < x) for models with atoms (defaults to `cdf`).
TestReport ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                   const std::string& name, double significance = kDefaultSignificance,
                   const std::function<double(double)>& cdf_left = {});

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

/// Upper tail of chi-square with `dof` degrees of freedom.
double chi2_survival(double statistic, double dof);

struct GofResult {
  TestReport chi2;  // 20 equiprobable cells from the model quantiles
  TestReport ks;
};

GofResult limiting_value_gof(std::span<const double> samples, const LimitingLaw& model,
                             double significance = kDefaultSignificance);

/// Monobit, runs and serial tests at 2 and 8 bits per block; serial tests
/// without enough data are reported as skipped.
std::vector<TestReport> run_battery(const BitStream& stream, double significance = kDefaultSignificance);

void write_report_table(std::ostream& out, const std::vector<TestReport>& reports);
/// One `key=value ...` record per line.
void write_report_records(std::ostream& out, const std::vector<TestReport>& reports);

}  // namespace bosonrng::stats
