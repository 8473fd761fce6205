#include "bosonrng/special.hpp"

#include <cmath>
#include <limits>

#include "bosonrng/error.hpp"

namespace bosonrng::special {

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: shapes must be positive");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10'000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete_beta: continued fraction did not converge", 0.0, x);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: shapes must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double poisson_pmf(double mean, std::uint64_t k) {
  if (!(mean >= 0.0)) throw DomainError("poisson_pmf: mean must be non-negative");
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

std::uint64_t poisson_truncation(double mean, double tail) {
  if (!(tail > 0.0 && tail < 1.0)) throw DomainError("poisson_truncation: tail must lie in (0,1)");
  if (mean == 0.0) return 0;
  // Upper tail accumulated from well beyond the bulk downwards avoids the
  // cancellation in 1 - CDF.
  const auto far = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 60.0);
  double upper = 0.0;  // P(X > k) for the current k
  for (std::uint64_t k = far; k > 0; --k) {
    upper += poisson_pmf(mean, k);  // now P(X >= k) = P(X > k - 1)
    if (upper > tail) return k;
  }
  return 0;
}

}  // namespace bosonrng::special
