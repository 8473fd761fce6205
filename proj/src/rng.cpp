#include "bosonrng/rng.hpp"

#include <stdexcept>

namespace bosonrng {

std::uint64_t RunStream::poisson(double mean) {
  if (!(mean >= 0.0) || mean > 700.0) {
    throw std::invalid_argument("poisson: mean must lie in [0, 700]");
  }
  if (mean == 0.0) return 0;
  const double u = uniform();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    const double next = cdf + pmf;
    if (next == cdf) break;  // tail exhausted in double precision
    cdf = next;
  }
  return k;
}

}  // namespace bosonrng
