#include "bosonrng/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bosonrng/error.hpp"
#include "bosonrng/special.hpp"

namespace bosonrng {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void check_unit_interval(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError(std::string(who) + ": argument outside [0,1]");
}

double shape_pdf(double t, double a, double b) {
  const double log_norm = special::log_beta(a, b);
  if (t == 0.0) {
    if (a < 1.0) return std::numeric_limits<double>::infinity();
    return a == 1.0 ? std::exp(-log_norm) : 0.0;
  }
  if (t == 1.0) {
    if (b < 1.0) return std::numeric_limits<double>::infinity();
    return b == 1.0 ? std::exp(-log_norm) : 0.0;
  }
  return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - log_norm);
}

}  // namespace

void BetaParams::validate() const {
  if (!(beta > 0.0) || !(rho > 0.0) || !std::isfinite(beta) || !std::isfinite(rho)) {
    throw ConfigError("beta shapes must be positive and finite");
  }
  if (!(effective_beta() > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must keep beta * (1 + epsilon) positive");
  }
}

BetaParams BetaParams::from_populations(std::uint64_t b0, std::uint64_t r0, double epsilon) {
  return BetaParams{static_cast<double>(b0) + 1.0, static_cast<double>(r0) + 1.0, epsilon};
}

double beta_pdf(double t, const BetaParams& params) {
  params.validate();
  check_unit_interval(t, "beta_pdf");
  return shape_pdf(t, params.effective_beta(), params.rho);
}

double beta_cdf(double t, const BetaParams& params) {
  params.validate();
  check_unit_interval(t, "beta_cdf");
  return special::incomplete_beta(params.effective_beta(), params.rho, t);
}

double beta_quantile(double xi, const BetaParams& params) {
  params.validate();
  return solve_quantile([&](double t) { return beta_cdf(t, params); }, xi);
}

Moments beta_moments(const BetaParams& params) {
  params.validate();
  const double a = params.effective_beta();
  const double b = params.rho;
  const double s = a + b;
  return {a / s, a * b / (s * s * (s + 1.0))};
}

Moments unshifted_moments(std::uint64_t b0, std::uint64_t r0) {
  if (b0 + r0 == 0) throw DomainError("unshifted_moments: empty initial populations");
  const double b = static_cast<double>(b0);
  const double r = static_cast<double>(r0);
  const double s = b + r;
  return {b / s, b * r / (s * s * (s + 1.0))};
}

double solve_quantile(const std::function<double(double)>& cdf, double xi, double tolerance) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("quantile: probability must lie in (0,1)");
  double lo = 0.0;
  double hi = 1.0;
  double f_lo = cdf(lo);
  double f_hi = cdf(hi);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = cdf(mid);
    if (f_mid < xi) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  const double t = (xi - f_lo <= f_hi - xi) ? lo : hi;
  const double residual = std::min(xi - f_lo, f_hi - xi);
  if (!(residual <= tolerance)) {
    throw ConvergenceError("quantile: CDF residual " + format_double(residual) +
                               " exceeds tolerance at xi=" + format_double(xi),
                           lo, hi);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Poisson mixture

void MixtureSpec::validate() const {
  if (!(lambda_min >= 0.0) || !(lambda_max >= lambda_min) || !std::isfinite(lambda_max)) {
    throw ConfigError("mixture: need 0 <= lambda_min <= lambda_max");
  }
  if (!(truncation_mass > 0.0 && truncation_mass < 1.0)) {
    throw ConfigError("mixture: truncation_mass must lie in (0,1)");
  }
  if (grid_points == 0) throw ConfigError("mixture: grid_points must be positive");
  if (!(epsilon > -1.0) || !std::isfinite(epsilon)) {
    throw ConfigError("mixture: epsilon must be finite and greater than -1");
  }
}

std::vector<double> MixtureSpec::lambda_grid() const {
  if (lambda_min == lambda_max || grid_points == 1) {
    return {lambda_min == lambda_max ? lambda_min : 0.5 * (lambda_min + lambda_max)};
  }
  std::vector<double> grid(grid_points);
  for (unsigned i = 0; i < grid_points; ++i) {
    grid[i] = lambda_min + (lambda_max - lambda_min) * i / (grid_points - 1);
  }
  return grid;
}

Mixture::Mixture(const MixtureSpec& spec) : spec_(spec) {
  spec_.validate();
  const auto grid = spec_.lambda_grid();
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> merged;
  for (const double lambda : grid) {
    const std::uint64_t n_max = special::poisson_truncation(lambda, spec_.truncation_mass);
    std::vector<double> mass(n_max + 1);
    double total = 0.0;
    for (std::uint64_t n = 0; n <= n_max; ++n) total += (mass[n] = special::poisson_pmf(lambda, n));
    for (auto& p : mass) p /= total;
    const double grid_weight = 1.0 / static_cast<double>(grid.size());
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      for (std::uint64_t m = 0; m <= n_max; ++m) {
        merged[{n, m}] += grid_weight * mass[n] * mass[m];
      }
    }
  }
  components_.reserve(merged.size());
  for (const auto& [nm, w] : merged) {
    components_.push_back({(static_cast<double>(nm.first) + 1.0) * (1.0 + spec_.epsilon),
                           static_cast<double>(nm.second) + 1.0, w});
  }
}

double Mixture::weight_sum() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight;
  return s;
}

double Mixture::pdf(double t) const {
  check_unit_interval(t, "mixture_pdf");
  double s = 0.0;
  for (const auto& c : components_) s += c.weight * shape_pdf(t, c.beta, c.rho);
  return s;
}

double Mixture::cdf(double t) const {
  check_unit_interval(t, "mixture_cdf");
  double s = 0.0;
  for (const auto& c : components_) s += c.weight * special::incomplete_beta(c.beta, c.rho, t);
  return std::clamp(s, 0.0, 1.0);
}

double Mixture::quantile(double xi) const {
  return solve_quantile([this](double t) { return cdf(t); }, xi);
}

double mixture_pdf(double t, const MixtureSpec& spec) { return Mixture(spec).pdf(t); }

double mixture_quantile(double xi, const MixtureSpec& spec) { return Mixture(spec).quantile(xi); }

// ---------------------------------------------------------------------------
// Limiting law seen through the detector

LimitingLaw LimitingLaw::beta(const BetaParams& params) {
  params.validate();
  LimitingLaw law;
  law.base_ = params;
  return law;
}

LimitingLaw LimitingLaw::mixture(const MixtureSpec& spec) {
  LimitingLaw law;
  law.base_ = std::make_shared<const Mixture>(spec);
  return law;
}

LimitingLaw LimitingLaw::with_instrument(double sigma) const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("instrument sigma must be >= 0");
  LimitingLaw law = *this;
  law.sigma_ = sigma;
  return law;
}

LimitingLaw LimitingLaw::reflected() const {
  LimitingLaw law = *this;
  law.reflected_ = !reflected_;
  return law;
}

double LimitingLaw::base_pdf(double t) const {
  if (reflected_) t = 1.0 - t;
  if (const auto* p = std::get_if<BetaParams>(&base_)) return shape_pdf(t, p->effective_beta(), p->rho);
  return std::get<std::shared_ptr<const Mixture>>(base_)->pdf(t);
}

double LimitingLaw::base_cdf(double t) const {
  double u = reflected_ ? 1.0 - t : t;
  double f;
  if (const auto* p = std::get_if<BetaParams>(&base_)) {
    f = special::incomplete_beta(p->effective_beta(), p->rho, u);
  } else {
    f = std::get<std::shared_ptr<const Mixture>>(base_)->cdf(u);
  }
  return reflected_ ? 1.0 - f : f;
}

namespace {

constexpr double kWindowSigmas = 12.0;

double gauss_density(double y, double sigma) {
  return std::exp(-0.5 * (y / sigma) * (y / sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double gauss_cdf(double y, double sigma) { return 0.5 * std::erfc(-y / (sigma * std::numbers::sqrt2)); }

// Fixed 8 x 61-point Gauss-Kronrod over the Gaussian window. Adaptive
// refinement to near machine tolerance can recurse to full depth on roundoff.
template <class F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double sum = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + i * h;
    const double hi = i + 1 == kPanels ? b : lo + h;
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 0);
  }
  return sum;
}

}  // namespace

// With X = clamp(T + sigma g, 0, 1) and F the CDF of T, integration by parts
// gives, for x in [0,1),
//   P(X <= x) = Phi((x - 1)/sigma) + int_0^1 F(t) phi_sigma(x - t) dt
// whose integrand is bounded even where the density of T is not.
double LimitingLaw::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  if (x < 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return unclamped_cdf(x);
}

double LimitingLaw::cdf_left(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  if (x <= 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return unclamped_cdf(x);
}

double LimitingLaw::unclamped_cdf(double x) const {
  if (sigma_ == 0.0) return base_cdf(std::clamp(x, 0.0, 1.0));
  const double lo = std::max(0.0, x - kWindowSigmas * sigma_);
  const double hi = std::min(1.0, x + kWindowSigmas * sigma_);
  const double body =
      integrate([&](double t) { return base_cdf(t) * gauss_density(x - t, sigma_); }, lo, hi);
  return std::clamp(gauss_cdf(x - 1.0, sigma_) + body, 0.0, 1.0);
}

double LimitingLaw::pdf(double x) const {
  check_unit_interval(x, "pdf");
  if (sigma_ == 0.0) return base_pdf(x);
  const double lo = std::max(0.0, x - kWindowSigmas * sigma_);
  const double hi = std::min(1.0, x + kWindowSigmas * sigma_);
  const double s2 = sigma_ * sigma_;
  const double body = integrate(
      [&](double t) { return base_cdf(t) * (x - t) / s2 * gauss_density(x - t, sigma_); }, lo, hi);
  return gauss_density(x - 1.0, sigma_) - body;
}

double LimitingLaw::quantile(double xi) const {
  return solve_quantile([this](double x) { return cdf(x); }, xi);
}

std::string LimitingLaw::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  if (const auto* p = std::get_if<BetaParams>(&base_)) {
    os << "beta(beta=" << p->beta << ",rho=" << p->rho << ",epsilon=" << p->epsilon << ")";
  } else {
    const auto& s = std::get<std::shared_ptr<const Mixture>>(base_)->spec();
    os << "poisson_mixture(lambda_min=" << s.lambda_min << ",lambda_max=" << s.lambda_max
       << ",grid_points=" << s.grid_points << ",truncation_mass=" << s.truncation_mass
       << ",epsilon=" << s.epsilon << ")";
  }
  if (sigma_ > 0.0) os << "*clamped_gauss(sigma=" << sigma_ << ")";
  if (reflected_) os << ":reflected";
  return os.str();
}

// ---------------------------------------------------------------------------
// Quantile tables and dumps

QuantileTable build_quantile_table(const LimitingLaw& law, unsigned n_bits) {
  if (n_bits == 0 || n_bits > kMaxExtractionBits) {
    throw ConfigError("n_bits must lie in [1, " + std::to_string(kMaxExtractionBits) + "]");
  }
  QuantileTable table;
  table.n_bits = n_bits;
  table.law = law.describe();
  const std::size_t cells = std::size_t{1} << n_bits;
  table.thresholds.reserve(cells - 1);
  for (std::size_t j = 1; j < cells; ++j) {
    const double t = law.quantile(static_cast<double>(j) / static_cast<double>(cells));
    if (!table.thresholds.empty() && !(t > table.thresholds.back())) {
      throw ConvergenceError("quantile table: thresholds not strictly increasing", table.thresholds.back(), t);
    }
    table.thresholds.push_back(t);
  }
  return table;
}

void write_quantile_table(std::ostream& out, const QuantileTable& table) {
  out << "# quantile-table\n";
  out << "# n_bits=" << table.n_bits << '\n';
  out << "# law=" << table.law << '\n';
  out << "# solver_tolerance=" << format_double(table.tolerance) << '\n';
  out << std::setprecision(17);
  for (double t : table.thresholds) out << t << '\n';
}

QuantileTable read_quantile_table(std::istream& in) {
  QuantileTable table;
  bool have_bits = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "n_bits") {
        table.n_bits = static_cast<unsigned>(std::stoul(value));
        have_bits = true;
      } else if (key == "law") {
        table.law = value;
      } else if (key == "solver_tolerance") {
        table.tolerance = std::stod(value);
      }
      continue;
    }
    table.thresholds.push_back(std::stod(line));
  }
  if (!have_bits || table.n_bits == 0 || table.n_bits > kMaxExtractionBits ||
      table.thresholds.size() != (std::size_t{1} << table.n_bits) - 1) {
    throw ConfigError("quantile table: header and threshold count disagree");
  }
  return table;
}

void write_density_csv(std::ostream& out, const LimitingLaw& law, std::size_t points) {
  if (points < 2) throw ConfigError("density grid needs at least two points");
  out << "t,pdf,cdf\n" << std::setprecision(17);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out << t << ',' << law.pdf(t) << ',' << law.cdf(t) << '\n';
  }
}

}  // namespace bosonrng
