#pragma once

#include <cstdint>

namespace pawf {

/// Hard-limiting (soft-limiter) power amplifier: linear with small-signal
/// gain `gain` until the output magnitude reaches the supply voltage `v_cc`,
/// flat beyond. The clipping threshold on the input magnitude is v_cc/gain.
struct PaParams {
  double gain;  // dimensionless small-signal gain G > 0
  double v_cc;  // supply / saturation voltage in volts, > 0

  PaParams(double gain_, double v_cc_);

  /// Input power (V^2) at which the linear and clipped regimes meet: (v_cc/gain)^2.
  double saturation_power() const;
};

/// Bussgang statistics of one amplifier at one input power, plus the analytic
/// derivatives the power-allocation optimizer consumes.
struct BussgangPoint {
  double power;           // input power P, V^2
  double alpha;           // equivalent linear gain, in [0, G]
  double p_out;           // total output power, V^2
  double sigma_eta2;      // distortion variance, V^2, >= 0
  double d_alpha_dp;      // d alpha / dP, <= 0
  double d_sigma_eta2_dp; // d sigma_eta2 / dP, >= 0
};

/// Transfer curve |output| as a function of input magnitude r >= 0.
double clip_transfer(double r, const PaParams& pa);

/// Equivalent linear gain alpha(p) = G * erf(v_cc / (G*sqrt(2p))).
/// alpha(0) = G by continuity.
double alpha(double p, const PaParams& pa);

/// Total output power. Evaluated as
///   G^2 * p * [erf(k) - (2k/sqrt(pi)) e^{-k^2}] + v_cc^2 * erfc(k),
/// which is algebraically identical to the textbook erf form but has no
/// cancelling terms, so it stays accurate deep into saturation.
double output_power(double p, const PaParams& pa);

/// Residual (non-coherent) output power sigma_eta2 = p_out - alpha^2 * p,
/// floored at 0 to absorb roundoff. 0 at p = 0.
double distortion_variance(double p, const PaParams& pa);

/// d alpha / dP = -v_cc * e^{-k^2} / (p * sqrt(2*pi*p)); requires p > 0.
double alpha_gradient(double p, const PaParams& pa);

/// d sigma_eta2 / dP = G^2 * erfc(k) * [erf(k) - (2k/sqrt(pi)) e^{-k^2}];
/// requires p > 0. Nonnegative for all p.
double distortion_gradient(double p, const PaParams& pa);

/// All of the above at once (with the p = 0 limit conventions alpha = G,
/// both derivatives 0, so optimizers can evaluate on the boundary).
BussgangPoint bussgang_point(double p, const PaParams& pa);

/// saturation_power as a free function, matching the other operations.
double saturation_power(const PaParams& pa);

/// Monte-Carlo estimate of the Bussgang statistics from envelope clipping of
/// circularly-symmetric complex Gaussian samples of variance p.
struct McEstimate {
  double alpha_hat;
  double sigma_eta2_hat;
  double p_out_hat;
  std::uint64_t n_samples;
  double se_alpha;      // standard errors of the three estimates
  double se_sigma_eta2;
  double se_p_out;
  double residual_corr; // |mean{v* (g(v) - alpha_hat v)}|, exact-zero by construction
  double se_residual;   // standard error of that residual statistic
};

/// Draws n_samples of v ~ CN(0, p) (two normals scaled by sqrt(p/2)), applies
/// clip_transfer to |v| with the phase preserved, and reports
///   alpha_hat = mean{g(v) v*} / mean{|v|^2}   (regression form; makes the
///               Bussgang orthogonality residual vanish identically),
///   p_out_hat = mean{|g(v)|^2},
///   sigma_eta2_hat = p_out_hat - |alpha_hat|^2 * mean{|v|^2},
/// with delta-method standard errors. Deterministic for a fixed seed.
McEstimate monte_carlo_bussgang(double p, const PaParams& pa,
                                std::uint64_t n_samples, std::uint64_t seed);

} // namespace pawf
