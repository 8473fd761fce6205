#include "bosonrng/detector.hpp"

#include <algorithm>
#include <cmath>

#include "bosonrng/error.hpp"

namespace bosonrng {

void DetectorModel::validate() const {
  if (!(fwhm_s >= 0.0) || !std::isfinite(fwhm_s)) throw ConfigError("detector: fwhm must be >= 0");
  if (!(intensity_scale > 0.0) || !std::isfinite(intensity_scale)) {
    throw ConfigError("detector: intensity scale must be positive");
  }
}

Reading read_out(double t, const DetectorModel& model, double normal_draw) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("read_out: limiting value outside [0,1]");
  Reading r;
  r.i_h = model.intensity_scale * t;
  r.i_v = model.intensity_scale * (1.0 - t);
  r.observed_t = model.fwhm_s == 0.0 ? t : std::clamp(t + model.sigma() * normal_draw, 0.0, 1.0);
  return r;
}

Reading read_out(double t, const DetectorModel& model, RunStream& noise) {
  if (model.fwhm_s == 0.0) return read_out(t, model, 0.0);
  return read_out(t, model, noise.normal());
}

NoiseDominance noise_dominance_check(const BetaParams& params, const DetectorModel& model,
                                     double threshold) {
  const double spread = std::sqrt(beta_moments(params).variance);
  NoiseDominance out;
  out.ratio = model.fwhm_s / spread;
  out.pass = out.ratio < threshold;
  return out;
}

int comparator(const Reading& reading, double threshold) {
  return reading.observed_t < threshold ? 0 : 1;
}

}  // namespace bosonrng
