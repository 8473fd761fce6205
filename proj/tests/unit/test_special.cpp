#include <doctest.h>

#include <cmath>

#include "bosonrng/special.hpp"
#include "oracles.hpp"

using namespace bosonrng::special;

TEST_CASE("log_beta against tgamma") {
  for (double a : {0.3, 1.0, 2.5, 17.0}) {
    for (double b : {0.7, 1.0, 4.0, 33.0}) {
      const double expected = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      CHECK(log_beta(a, b) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  CHECK(log_beta(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("incomplete beta closed forms") {
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    CHECK(incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(incomplete_beta(2.0, 1.0, x) == doctest::Approx(x * x).epsilon(1e-14));
    CHECK(incomplete_beta(1.0, 3.0, x) == doctest::Approx(1.0 - std::pow(1.0 - x, 3)).epsilon(1e-14));
    CHECK(incomplete_beta(1.2, 1.0, x) == doctest::Approx(std::pow(x, 1.2)).epsilon(1e-13));
  }
}

TEST_CASE("incomplete beta against quadrature") {
  for (double a : {0.5, 1.3, 4.0, 40.0}) {
    for (double b : {0.6, 4.0, 25.0}) {
      for (double x : {0.05, 0.3, 0.5, 0.77, 0.98}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        CHECK(std::abs(incomplete_beta(a, b, x) - oracle_test::beta_cdf_quadrature(x, a, b)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("incomplete beta symmetry") {
  for (double x : {0.1, 0.4, 0.65}) {
    CHECK(incomplete_beta(3.5, 7.0, x) + incomplete_beta(7.0, 3.5, 1.0 - x) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("poisson pmf and truncation") {
  CHECK(poisson_pmf(0.0, 0) == 1.0);
  CHECK(poisson_pmf(0.0, 3) == 0.0);
  for (int k = 0; k < 30; ++k) {
    CHECK(poisson_pmf(2.0, k) == doctest::Approx(oracle_test::poisson(2.0, k)).epsilon(1e-12));
  }
  CHECK(poisson_truncation(0.0, 1e-12) == 0);
  for (double mean : {0.01, 0.5, 2.0, 7.5}) {
    const auto n = poisson_truncation(mean, 1e-12);
    double below = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) below += oracle_test::poisson(mean, static_cast<int>(k));
    CHECK(1.0 - below <= 1.5e-12);
    double shorter = 0.0;
    for (std::uint64_t k = 0; k + 1 <= n; ++k) shorter += oracle_test::poisson(mean, static_cast<int>(k));
    CHECK(1.0 - shorter > 1e-12 * 0.5);
  }
}
