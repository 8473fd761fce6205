#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace bosonrng {

/// Shapes of the limiting-value law Beta(beta * (1 + epsilon), rho).
/// For a run seeded with populations (b0, r0) the shapes are (b0 + 1, r0 + 1).
struct BetaParams {
  double beta = 1.0;
  double rho = 1.0;
  double epsilon = 0.0;

  double effective_beta() const { return beta * (1.0 + epsilon); }
  void validate() const;  // throws ConfigError

  static BetaParams from_populations(std::uint64_t b0, std::uint64_t r0, double epsilon = 0.0);
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

double beta_pdf(double t, const BetaParams& params);
double beta_cdf(double t, const BetaParams& params);
double beta_quantile(double xi, const BetaParams& params);

/// Exact moments of Beta(beta', rho).
Moments beta_moments(const BetaParams& params);

/// Moments in the unshifted form b0/(b0+r0) and
/// b0 r0 / ((b0+r0)^2 (b0+r0+1)), i.e. the beta moments with shapes (b0, r0)
/// instead of (b0 + 1, r0 + 1). Kept for comparison only; they do not match
/// the simulated urn. Requires b0 + r0 > 0.
Moments unshifted_moments(std::uint64_t b0, std::uint64_t r0);

inline constexpr double kQuantileTolerance = 1e-10;

/// Bisection on a nondecreasing CDF over [0,1]. Returns t with
/// |cdf(t) - xi| <= tolerance or throws ConvergenceError with the final bracket.
double solve_quantile(const std::function<double(double)>& cdf, double xi,
                      double tolerance = kQuantileTolerance);

/// Coherent-state inputs: photon numbers n, m of the two modes are
/// independent Poisson(lambda), and the run then has shapes (n + 1, m + 1).
/// When lambda_min < lambda_max the law is averaged uniformly over
/// grid_points evenly spaced lambda values.
struct MixtureSpec {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double truncation_mass = 1e-12;
  unsigned grid_points = 11;
  double epsilon = 0.0;

  void validate() const;
  std::vector<double> lambda_grid() const;
};

/// Precomputed components of a MixtureSpec; build once, share read-only.
class Mixture {
 public:
  struct Component {
    double beta;  // effective blue shape, (n + 1)(1 + epsilon)
    double rho;
    double weight;
  };

  explicit Mixture(const MixtureSpec& spec);

  double pdf(double t) const;
  /// Weighted sum of regularized incomplete beta functions.
  double cdf(double t) const;
  double quantile(double xi) const;

  const MixtureSpec& spec() const { return spec_; }
  const std::vector<Component>& components() const { return components_; }
  double weight_sum() const;

 private:
  MixtureSpec spec_;
  std::vector<Component> components_;
};

double mixture_pdf(double t, const MixtureSpec& spec);
double mixture_quantile(double xi, const MixtureSpec& spec);

/// Distribution of the quantity a comparator sees: a beta or mixture
/// limiting law, optionally blurred by a clamped Gaussian instrument
/// function and optionally reflected (t -> 1 - t).
class LimitingLaw {
 public:
  static LimitingLaw beta(const BetaParams& params);
  static LimitingLaw mixture(const MixtureSpec& spec);

  /// Observed value clamp(t + sigma * g, 0, 1) with g standard normal.
  LimitingLaw with_instrument(double sigma) const;
  LimitingLaw reflected() const;

  /// Density of the continuous part on (0,1).
  double pdf(double x) const;
  double cdf(double x) const;
  /// P(X < x); differs from cdf only at the clamping atoms 0 and 1.
  double cdf_left(double x) const;
  double quantile(double xi) const;

  double sigma() const { return sigma_; }
  std::string describe() const;

 private:
  double base_pdf(double t) const;
  double base_cdf(double t) const;
  double unclamped_cdf(double x) const;  // P(T + sigma g <= x), x in [0,1]

  std::variant<BetaParams, std::shared_ptr<const Mixture>> base_;
  double sigma_ = 0.0;
  bool reflected_ = false;
};

/// Thresholds t_{j/2^n}, j = 1 .. 2^n - 1, splitting [0,1] into 2^n
/// equiprobable cells.
struct QuantileTable {
  unsigned n_bits = 1;
  std::vector<double> thresholds;
  std::string law;
  double tolerance = kQuantileTolerance;
};

inline constexpr unsigned kMaxExtractionBits = 16;

QuantileTable build_quantile_table(const LimitingLaw& law, unsigned n_bits);

/// Plain text: `#`-prefixed header lines (n_bits, law, solver_tolerance)
/// followed by one threshold per line at 17 significant digits.
void write_quantile_table(std::ostream& out, const QuantileTable& table);
QuantileTable read_quantile_table(std::istream& in);

/// CSV `t,pdf,cdf` on `points` evenly spaced values covering [0,1].
void write_density_csv(std::ostream& out, const LimitingLaw& law, std::size_t points);

}  // namespace bosonrng
