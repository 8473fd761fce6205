#pragma once

#include "bosonrng/distributions.hpp"
#include "bosonrng/rng.hpp"

namespace bosonrng {

/// FWHM of a Gaussian is kFwhmPerSigma * sigma, i.e. 2 sqrt(2 ln 2) sigma.
inline const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::log(2.0));

struct DetectorModel {
  /// Instrument-function FWHM in limiting-value units.
  double fwhm_s = 0.0;
  /// I_H + I_V for any reading.
  double intensity_scale = 1.0;

  double sigma() const { return fwhm_s / kFwhmPerSigma; }
  void validate() const;
};

/// The blue mode is read out as the horizontal polarisation.
struct Reading {
  double i_h = 0.0;
  double i_v = 0.0;
  double observed_t = 0.0;  // noisy blue fraction, clamped to [0,1]
};

/// Pure read-out for an explicit standard-normal draw.
Reading read_out(double t, const DetectorModel& model, double normal_draw);
Reading read_out(double t, const DetectorModel& model, RunStream& noise);

struct NoiseDominance {
  double ratio = 0.0;  // fwhm_s / standard deviation of the limiting law
  bool pass = false;
};

inline constexpr double kDefaultDominanceThreshold = 0.1;

NoiseDominance noise_dominance_check(const BetaParams& params, const DetectorModel& model,
                                     double threshold = kDefaultDominanceThreshold);

/// 0 if observed_t < threshold, 1 otherwise (ties go to 1).
int comparator(const Reading& reading, double threshold);

}  // namespace bosonrng
