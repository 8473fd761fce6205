#pragma once

#include <cstdint>

namespace bosonrng::special {

/// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), x in [0,1], a, b > 0.
/// Continued fraction (modified Lentz), evaluated on whichever side of the
/// mean converges fastest.
double incomplete_beta(double a, double b, double x);

/// P(X = k) for X ~ Poisson(mean); mean 0 puts all mass on k = 0.
double poisson_pmf(double mean, std::uint64_t k);

/// Smallest N with P(X > N) <= tail for X ~ Poisson(mean).
std::uint64_t poisson_truncation(double mean, double tail);

}  // namespace bosonrng::special
