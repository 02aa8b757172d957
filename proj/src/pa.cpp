#include "pawf/pa.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pawf {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kTwoOverSqrtPi = 2.0 / std::sqrt(kPi);

void require_finite_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0))
    throw std::domain_error(std::string(name) + " must be positive and finite");
}

void require_power(double p, const char* op) {
  if (!(std::isfinite(p) && p >= 0.0))
    throw std::domain_error(std::string(op) + ": power must be nonnegative and finite");
}

double k_of(double p, const PaParams& pa) {
  return pa.v_cc / (pa.gain * std::sqrt(2.0 * p));
}

// erf(k) - (2k/sqrt(pi)) e^{-k^2} = (4/sqrt(pi)) * integral_0^k t^2 e^{-t^2} dt.
// Direct subtraction cancels badly for small k, so a Maclaurin series takes
// over below 0.5 (alternating, |term| < 1e-19 by n = 12 at k = 0.5).
double erf_minus_gauss_moment(double k) {
  if (k < 0.5) {
    const double k2 = k * k;
    double term = k * k2;         // k^3, the m = 0 numerator
    double sum = term / 3.0;
    double fact = 1.0;
    for (int m = 1; m <= 14; ++m) {
      term *= -k2;
      fact *= static_cast<double>(m);
      sum += term / (fact * static_cast<double>(2 * m + 3));
    }
    return kTwoOverSqrtPi * 2.0 * sum;
  }
  return std::erf(k) - kTwoOverSqrtPi * k * std::exp(-k * k);
}

} // namespace

PaParams::PaParams(double gain_, double v_cc_) : gain(gain_), v_cc(v_cc_) {
  require_finite_positive(gain, "PaParams.gain");
  require_finite_positive(v_cc, "PaParams.v_cc");
}

double PaParams::saturation_power() const {
  const double r = v_cc / gain;
  return r * r;
}

double saturation_power(const PaParams& pa) { return pa.saturation_power(); }

double clip_transfer(double r, const PaParams& pa) {
  if (!(std::isfinite(r) && r >= 0.0))
    throw std::domain_error("clip_transfer: input magnitude must be nonnegative");
  const double out = pa.gain * r;
  return out < pa.v_cc ? out : pa.v_cc;
}

double alpha(double p, const PaParams& pa) {
  require_power(p, "alpha");
  if (p == 0.0) return pa.gain;
  return pa.gain * std::erf(k_of(p, pa));
}

double output_power(double p, const PaParams& pa) {
  require_power(p, "output_power");
  if (p == 0.0) return 0.0;
  const double k = k_of(p, pa);
  return pa.gain * pa.gain * p * erf_minus_gauss_moment(k) +
         pa.v_cc * pa.v_cc * std::erfc(k);
}

double distortion_variance(double p, const PaParams& pa) {
  require_power(p, "distortion_variance");
  if (p == 0.0) return 0.0;
  // sigma = p_out - alpha^2 p, regrouped as
  //   G^2 p [ erfc(k)(erf(k) + 2k^2) - (2k/sqrt(pi)) e^{-k^2} ]
  // to keep the linear-regime tail (where the two routes cancel to ~e^{-k^2})
  // accurate down to the underflow boundary.
  const double k = k_of(p, pa);
  const double erf_k = std::erf(k);
  const double erfc_k = std::erfc(k);
  const double g2p = pa.gain * pa.gain * p;
  const double s = g2p * (erfc_k * (erf_k + 2.0 * k * k) -
                          kTwoOverSqrtPi * k * std::exp(-k * k));
  return s > 0.0 ? s : 0.0;
}

double alpha_gradient(double p, const PaParams& pa) {
  if (!(std::isfinite(p) && p > 0.0))
    throw std::domain_error("alpha_gradient: power must be strictly positive");
  const double k = k_of(p, pa);
  return -pa.v_cc * std::exp(-k * k) / (p * std::sqrt(2.0 * kPi * p));
}

double distortion_gradient(double p, const PaParams& pa) {
  if (!(std::isfinite(p) && p > 0.0))
    throw std::domain_error("distortion_gradient: power must be strictly positive");
  const double k = k_of(p, pa);
  return pa.gain * pa.gain * std::erfc(k) * erf_minus_gauss_moment(k);
}

BussgangPoint bussgang_point(double p, const PaParams& pa) {
  require_power(p, "bussgang_point");
  BussgangPoint b;
  b.power = p;
  b.alpha = alpha(p, pa);
  b.p_out = output_power(p, pa);
  b.sigma_eta2 = distortion_variance(p, pa);
  if (p == 0.0) {
    // k -> inf singularity is removable; the one-sided limits are 0.
    b.d_alpha_dp = 0.0;
    b.d_sigma_eta2_dp = 0.0;
  } else {
    b.d_alpha_dp = alpha_gradient(p, pa);
    b.d_sigma_eta2_dp = distortion_gradient(p, pa);
  }
  return b;
}

McEstimate monte_carlo_bussgang(double p, const PaParams& pa,
                                std::uint64_t n_samples, std::uint64_t seed) {
  if (!(std::isfinite(p) && p > 0.0))
    throw std::domain_error("monte_carlo_bussgang: power must be strictly positive");
  if (n_samples < 1000)
    throw std::domain_error("monte_carlo_bussgang: need at least 1000 samples");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(p / 2.0));
  const double r_th = pa.v_cc / pa.gain;

  // Accumulate first and second moments of (y, u, m) with
  //   y = g(r) * r   (the real part of g(v) v*; the imaginary part is 0
  //                   because the clip preserves phase),
  //   u = g(r)^2, m = r^2.
  double sy = 0, su = 0, sm = 0;
  double syy = 0, suu = 0, smm = 0, syu = 0, sym = 0, sum_ = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    const double m = re * re + im * im;
    const double r = std::sqrt(m);
    const double g = r < r_th ? pa.gain * r : pa.v_cc;
    const double y = g * r;
    const double u = g * g;
    sy += y; su += u; sm += m;
    syy += y * y; suu += u * u; smm += m * m;
    syu += y * u; sym += y * m; sum_ += u * m;
  }
  const double n = static_cast<double>(n_samples);
  const double my = sy / n, mu = su / n, mm = sm / n;
  // Sample covariances of the per-draw variables.
  const double cyy = syy / n - my * my;
  const double cuu = suu / n - mu * mu;
  const double cmm = smm / n - mm * mm;
  const double cyu = syu / n - my * mu;
  const double cym = sym / n - my * mm;
  const double cum = sum_ / n - mu * mm;

  McEstimate e;
  e.n_samples = n_samples;
  e.alpha_hat = my / mm;
  e.p_out_hat = mu;
  e.sigma_eta2_hat = mu - my * my / mm;

  // Delta method. alpha = y/m: grad (1/m, -y/m^2) over (y, m).
  {
    const double a = 1.0 / mm, b = -my / (mm * mm);
    e.se_alpha = std::sqrt(std::max(0.0, a * a * cyy + 2 * a * b * cym + b * b * cmm) / n);
  }
  e.se_p_out = std::sqrt(std::max(0.0, cuu) / n);
  // sigma = u - y^2/m: grad over (y, u, m) = (-2y/m, 1, y^2/m^2).
  {
    const double gy = -2.0 * my / mm, gu = 1.0, gm = my * my / (mm * mm);
    const double var = gy * gy * cyy + gu * gu * cuu + gm * gm * cmm +
                       2 * gy * gu * cyu + 2 * gy * gm * cym + 2 * gu * gm * cum;
    e.se_sigma_eta2 = std::sqrt(std::max(0.0, var) / n);
  }
  // Residual correlation mean{v*(g(v) - alpha_hat v)} = mean(y) - alpha_hat*mean(m),
  // identically zero for the regression alpha_hat; report it with its SE anyway.
  e.residual_corr = std::abs(my - e.alpha_hat * mm);
  {
    const double a = e.alpha_hat;
    const double var = cyy - 2 * a * cym + a * a * cmm;
    e.se_residual = std::sqrt(std::max(var, 0.0) / n);
  }
  return e;
}

} // namespace pawf
