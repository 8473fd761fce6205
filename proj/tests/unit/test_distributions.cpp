#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bosonrng/distributions.hpp"
#include "bosonrng/error.hpp"
#include "oracles.hpp"

using namespace bosonrng;

TEST_CASE("beta pdf values") {
  CHECK(beta_pdf(0.3, {1, 1, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_pdf(0.5, {4, 4, 0}) == doctest::Approx(2.1875).epsilon(1e-13));  // 140 / 64
  for (double t : {0.1, 0.33, 0.5}) {
    CHECK(beta_pdf(t, {2.5, 2.5, 0}) == doctest::Approx(beta_pdf(1.0 - t, {2.5, 2.5, 0})).epsilon(1e-13));
    CHECK(beta_pdf(t, {3, 5, 0}) == doctest::Approx(oracle_test::beta_density(t, 3, 5)).epsilon(1e-12));
  }
  CHECK(beta_pdf(0.0, {1, 1, 0}) == doctest::Approx(1.0));
  CHECK(beta_pdf(0.0, {2, 1, 0}) == 0.0);
  CHECK_THROWS_AS(beta_pdf(1.5, {1, 1, 0}), DomainError);
  CHECK_THROWS_AS(beta_pdf(0.5, {0, 1, 0}), ConfigError);
  CHECK_THROWS_AS(beta_pdf(0.5, {1, 1, -1.0}), ConfigError);
}

TEST_CASE("beta pdf integrates to one") {
  boost::math::quadrature::tanh_sinh<double> q;
  for (BetaParams p : {BetaParams{4, 4, 0}, BetaParams{1, 1, 0.2}, BetaParams{0.5, 2.0, 0}}) {
    const double left = q.integrate([&](double t) { return beta_pdf(t, p); }, 0.0, 0.5);
    const BetaParams mirror{p.rho, p.effective_beta(), 0};
    const double right = q.integrate([&](double t) { return beta_pdf(t, mirror); }, 0.0, 0.5);
    CHECK(std::abs(left + right - 1.0) <= 1e-9);
  }
}

TEST_CASE("epsilon equivariance is exact") {
  for (double t : {0.05, 0.4, 0.8}) {
    CHECK(beta_pdf(t, {1, 1, 0.2}) == beta_pdf(t, {1.2, 1, 0}));
    CHECK(beta_cdf(t, {2, 3, 0.5}) == beta_cdf(t, {3, 3, 0}));
  }
}

TEST_CASE("beta moments") {
  const auto u = beta_moments({1, 1, 0});
  CHECK(u.mean == doctest::Approx(0.5));
  CHECK(u.variance == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  const auto b = beta_moments(BetaParams::from_populations(3, 3));
  CHECK(b.mean == doctest::Approx(0.5));
  CHECK(b.variance == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
  const auto eps = beta_moments({1, 1, 0.2});
  CHECK(eps.mean == doctest::Approx(1.2 / 2.2).epsilon(1e-15));

  // The unshifted form disagrees with the urn: (1,0) gives mean 1, the urn 2/3.
  CHECK(unshifted_moments(3, 3).mean == 0.5);
  CHECK(unshifted_moments(3, 3).variance == doctest::Approx(9.0 / (36.0 * 7.0)));
  CHECK(unshifted_moments(1, 0).mean == 1.0);
  CHECK(beta_moments(BetaParams::from_populations(1, 0)).mean == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(unshifted_moments(0, 0), DomainError);
}

TEST_CASE("beta cdf and quantiles") {
  CHECK(beta_cdf(0.5, {3, 3, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(beta_cdf(0.0, {3, 3, 0}) == 0.0);
  CHECK(beta_cdf(1.0, {3, 3, 0}) == 1.0);
  CHECK(beta_quantile(0.5, {7, 7, 0}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(beta_quantile(0.5, {2, 1, 0}) - 1.0 / std::sqrt(2.0)) <= 1e-9);

  // beta' = 1.2: independent quadrature CDF inverted by bisection, and the
  // closed form 0.5^(1 / 1.2).
  const double oracle = oracle_test::bisect(
      [](double t) { return oracle_test::beta_cdf_quadrature(t, 1.2, 1.0); }, 0.5, 0.0, 1.0);
  CHECK(std::abs(oracle - 0.5612310241546865) <= 1e-9);
  CHECK(std::abs(beta_quantile(0.5, {1, 1, 0.2}) - oracle) <= 1e-9);

  for (double xi : {1e-6, 0.01, 0.3, 0.77, 0.999}) {
    const BetaParams p{4, 9, 0};
    CHECK(std::abs(beta_cdf(beta_quantile(xi, p), p) - xi) <= 1e-10);
  }
  CHECK_THROWS_AS(beta_quantile(0.0, {1, 1, 0}), DomainError);
  CHECK_THROWS_AS(beta_quantile(1.0, {1, 1, 0}), DomainError);
}

TEST_CASE("quantile solver reports non-convergence with its bracket") {
  // A CDF with a jump at 0.4 cannot reach 0.5 within tolerance.
  auto step = [](double t) { return t < 0.4 ? 0.0 : 1.0; };
  try {
    solve_quantile(step, 0.5);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.lower() <= 0.4);
    CHECK(e.upper() >= 0.4);
    CHECK(e.upper() - e.lower() < 1e-12);
  }
}

TEST_CASE("mixture degenerates to the uniform law") {
  MixtureSpec spec;  // lambda_min = lambda_max = 0
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    CHECK(std::abs(mixture_pdf(t, spec) - 1.0) <= 1e-10);
  }
  for (double xi : {0.1, 0.5, 0.9}) CHECK(std::abs(mixture_quantile(xi, spec) - xi) <= 1e-9);
}

TEST_CASE("mixture against brute-force double sum") {
  MixtureSpec spec;
  spec.lambda_min = spec.lambda_max = 2.0;
  Mixture mix(spec);
  CHECK(std::abs(mix.weight_sum() - 1.0) <= 1e-14);
  for (double t : {0.01, 0.2, 0.5, 0.73, 0.99}) {
    CHECK(std::abs(mix.pdf(t) - oracle_test::mixture_density_bruteforce(t, 2.0, 60)) <= 1e-10);
  }
}

TEST_CASE("mixture symmetry and median") {
  for (auto [lo, hi] : {std::pair{0.5, 0.5}, std::pair{1.0, 4.0}, std::pair{0.0, 3.0}}) {
    MixtureSpec spec;
    spec.lambda_min = lo;
    spec.lambda_max = hi;
    Mixture mix(spec);
    for (double t : {0.1, 0.3, 0.45}) CHECK(std::abs(mix.pdf(t) - mix.pdf(1.0 - t)) <= 1e-10);
    CHECK(std::abs(mix.quantile(0.5) - 0.5) <= 1e-8);
    CHECK(std::abs(mix.cdf(0.5) - 0.5) <= 1e-12);
  }
}

TEST_CASE("mixture cdf matches quadrature of its pdf") {
  MixtureSpec spec;
  spec.lambda_min = 1.0;
  spec.lambda_max = 3.0;
  spec.epsilon = 0.2;
  Mixture mix(spec);
  boost::math::quadrature::tanh_sinh<double> q;
  for (double t : {0.2, 0.5, 0.8}) {
    CHECK(std::abs(mix.cdf(t) - q.integrate([&](double s) { return mix.pdf(s); }, 0.0, t)) <= 1e-9);
  }
}

TEST_CASE("mixture quantile against sampling") {
  MixtureSpec spec;
  spec.lambda_min = spec.lambda_max = 2.0;
  const double q25 = mixture_quantile(0.25, spec);
  std::mt19937_64 rng(2024);
  std::poisson_distribution<int> pois(2.0);
  const int n = 1'000'000;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const int a = pois(rng);
    const int b = pois(rng);
    if (oracle_test::sample_beta(rng, a + 1.0, b + 1.0) < q25) ++below;
  }
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(below / static_cast<double>(n) - 0.25) <= 3 * sigma);
}

TEST_CASE("mixture spec validation") {
  MixtureSpec spec;
  spec.lambda_min = 2.0;
  spec.lambda_max = 1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.lambda_min = -1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = {};
  spec.truncation_mass = 0.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = {};
  spec.lambda_max = 2.0;
  spec.grid_points = 5;
  CHECK(spec.lambda_grid() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("instrument-blurred law") {
  const double sigma = 0.05;
  const auto law = LimitingLaw::beta({1, 1, 0}).with_instrument(sigma);
  // Atom at 0: P(T + sigma g <= 0) for uniform T equals sigma * phi(0) ... by
  // direct quadrature of Phi(-t / sigma) over t.
  boost::math::quadrature::tanh_sinh<double> q;
  const double atom0 = q.integrate([&](double t) { return 0.5 * std::erfc(t / sigma / std::sqrt(2.0)); }, 0.0, 1.0);
  CHECK(std::abs(law.cdf(0.0) - atom0) <= 1e-10);
  CHECK(law.cdf_left(0.0) == 0.0);
  CHECK(law.cdf(1.0) == 1.0);
  CHECK(std::abs(law.cdf_left(1.0) - (1.0 - atom0)) <= 1e-10);
  CHECK(std::abs(law.cdf(0.5) - 0.5) <= 1e-12);
  CHECK(std::abs(law.quantile(0.5) - 0.5) <= 1e-9);
  for (double x : {0.02, 0.3, 0.6}) {
    const double direct = q.integrate(
        [&](double t) { return 0.5 * std::erfc((t - x) / sigma / std::sqrt(2.0)); }, 0.0, 1.0);
    CHECK(std::abs(law.cdf(x) - direct) <= 1e-9);
  }
}

TEST_CASE("reflected law") {
  const auto base = LimitingLaw::beta({2, 1, 0});
  const auto refl = base.reflected();
  for (double x : {0.1, 0.4, 0.9}) {
    CHECK(refl.cdf(x) == doctest::Approx(1.0 - base.cdf(1.0 - x)).epsilon(1e-13));
    CHECK(refl.pdf(x) == doctest::Approx(base.pdf(1.0 - x)).epsilon(1e-13));
  }
  CHECK(std::abs(refl.quantile(0.5) - (1.0 - 1.0 / std::sqrt(2.0))) <= 1e-9);
}

TEST_CASE("quantile table") {
  const auto table = build_quantile_table(LimitingLaw::beta({1, 1, 0}), 2);
  REQUIRE(table.thresholds.size() == 3);
  CHECK(std::abs(table.thresholds[0] - 0.25) <= 1e-10);
  CHECK(std::abs(table.thresholds[1] - 0.5) <= 1e-10);
  CHECK(std::abs(table.thresholds[2] - 0.75) <= 1e-10);

  const auto law = LimitingLaw::beta({4, 2, 0.3});
  const auto t3 = build_quantile_table(law, 3);
  for (std::size_t j = 0; j < t3.thresholds.size(); ++j) {
    CHECK(std::abs(law.cdf(t3.thresholds[j]) - (j + 1) / 8.0) <= 1e-9);
    if (j > 0) CHECK(t3.thresholds[j] > t3.thresholds[j - 1]);
  }

  std::stringstream ss;
  write_quantile_table(ss, t3);
  const auto back = read_quantile_table(ss);
  CHECK(back.n_bits == 3);
  CHECK(back.thresholds == t3.thresholds);
  CHECK(back.law == t3.law);

  CHECK_THROWS_AS(build_quantile_table(law, 0), ConfigError);
  CHECK_THROWS_AS(build_quantile_table(law, kMaxExtractionBits + 1), ConfigError);
  std::istringstream bad("# quantile-table\n# n_bits=2\n0.3\n");
  CHECK_THROWS_AS(read_quantile_table(bad), ConfigError);
}

TEST_CASE("density CSV") {
  std::ostringstream os;
  write_density_csv(os, LimitingLaw::beta({1, 1, 0}), 3);
  CHECK(os.str().rfind("t,pdf,cdf\n", 0) == 0);
  std::istringstream in(os.str());
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
