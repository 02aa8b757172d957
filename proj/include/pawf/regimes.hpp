#pragma once

#include <string>

#include "pawf/mimo.hpp"

namespace pawf {

enum class Regime { NoiseLimited, DistortionLimited, Transition };

std::string to_string(Regime r);

struct RegimeReport {
  double threshold_sigma_n2 = 0.0; // V^2
  Regime regime = Regime::NoiseLimited;
  double ratio = 0.0; // sigma_n2 / threshold (inf for a zero threshold)
};

/// Thermal-noise variance at which the thermal and distortion covariance
/// traces are equal under a uniform allocation at p_avg per antenna:
///   sigma_n,th^2 = sigma_eta2(p_avg) * ||H||_F^2 / N_R.
double noise_threshold(const ChannelMatrix& h, const PaParams& pa, double p_avg);

/// NoiseLimited when sigma_n2 > band * threshold, DistortionLimited when
/// sigma_n2 < threshold / band, Transition inside the band. band >= 1.
RegimeReport classify(double sigma_n2, double threshold, double band = 3.0);

} // namespace pawf
