#include "pawf/regimes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pawf {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::NoiseLimited: return "NoiseLimited";
    case Regime::DistortionLimited: return "DistortionLimited";
    case Regime::Transition: return "Transition";
  }
  return "?";
}

double noise_threshold(const ChannelMatrix& h, const PaParams& pa, double p_avg) {
  if (!(std::isfinite(p_avg) && p_avg >= 0.0))
    throw std::domain_error("noise_threshold: p_avg must be nonnegative");
  return distortion_variance(p_avg, pa) * frobenius_norm_sq(h) /
         static_cast<double>(h.rows());
}

RegimeReport classify(double sigma_n2, double threshold, double band) {
  if (!(std::isfinite(sigma_n2) && sigma_n2 > 0.0))
    throw std::domain_error("classify: sigma_n2 must be positive");
  if (!(std::isfinite(threshold) && threshold >= 0.0))
    throw std::domain_error("classify: threshold must be nonnegative");
  if (!(band >= 1.0)) throw std::domain_error("classify: band must be >= 1");

  RegimeReport rep;
  rep.threshold_sigma_n2 = threshold;
  rep.ratio = threshold > 0.0 ? sigma_n2 / threshold
                              : std::numeric_limits<double>::infinity();
  if (sigma_n2 > band * threshold)
    rep.regime = Regime::NoiseLimited;
  else if (sigma_n2 < threshold / band)
    rep.regime = Regime::DistortionLimited;
  else
    rep.regime = Regime::Transition;
  return rep;
}

} // namespace pawf
