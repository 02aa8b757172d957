#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pawf/mimo.hpp"
#include "pawf/pa.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Central finite difference with a relative step.
inline double central_fd(const std::function<double(double)>& f, double x,
                         double rel_step = 1e-6) {
  const double h = rel_step * std::abs(x);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// Quadrature oracle: composite Simpson over [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Moments of the clipped real Gaussian computed by quadrature of the defining
// integrals (no erf identities involved): returns {E[g(x)x]/p, E[g(x)^2]}.
inline std::pair<double, double> clipped_moments_quadrature(double p, const pawf::PaParams& pa) {
  const double sd = std::sqrt(p);
  const double c = pa.v_cc / pa.gain;
  auto phi = [&](double x) {
    return std::exp(-x * x / (2.0 * p)) / (sd * std::sqrt(2.0 * M_PI));
  };
  auto g = [&](double x) { return std::min(pa.gain * x, pa.v_cc); };
  auto cross = [&](double x) { return g(x) * x * phi(x); };
  auto sq = [&](double x) { return g(x) * g(x) * phi(x); };
  const double hi = 12.0 * sd;
  // Split at the clip point so Simpson never straddles the kink.
  const double mid = std::min(c, hi);
  const double m1 = 2.0 * (simpson(cross, 0.0, mid, 4000) + simpson(cross, mid, hi, 4000));
  const double m2 = 2.0 * (simpson(sq, 0.0, mid, 4000) + simpson(sq, mid, hi, 4000));
  return {m1 / p, m2};
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle on a *real* Gaussian drive through the symmetric limiter.
struct RealMcResult {
  double alpha_hat, p_out_hat, sigma_hat;
  double se_alpha, se_p_out, se_sigma;
};

inline RealMcResult real_clipping_mc(double p, const pawf::PaParams& pa, std::uint64_t n,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(p));
  double sy = 0, su = 0, sm = 0, syy = 0, suu = 0, smm = 0, sym = 0, syu = 0, sum = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = normal(rng);
    const double g = std::clamp(pa.gain * x, -pa.v_cc, pa.v_cc);
    const double y = g * x, u = g * g, m = x * x;
    sy += y; su += u; sm += m;
    syy += y * y; suu += u * u; smm += m * m;
    sym += y * m; syu += y * u; sum += u * m;
  }
  const double dn = static_cast<double>(n);
  const double my = sy / dn, mu = su / dn, mm = sm / dn;
  const double cyy = syy / dn - my * my, cuu = suu / dn - mu * mu, cmm = smm / dn - mm * mm;
  const double cym = sym / dn - my * mm, cyu = syu / dn - my * mu, cum = sum / dn - mu * mm;
  RealMcResult r;
  r.alpha_hat = my / mm;
  r.p_out_hat = mu;
  r.sigma_hat = mu - my * my / mm;
  {
    const double a = 1.0 / mm, b = -my / (mm * mm);
    r.se_alpha = std::sqrt(std::max(0.0, a * a * cyy + 2 * a * b * cym + b * b * cmm) / dn);
  }
  r.se_p_out = std::sqrt(std::max(0.0, cuu) / dn);
  {
    const double gy = -2.0 * my / mm, gm = my * my / (mm * mm);
    const double var = gy * gy * cyy + cuu + gm * gm * cmm + 2 * gy * cyu +
                       2 * gy * gm * cym + 2 * gm * cum;
    r.se_sigma = std::sqrt(std::max(0.0, var) / dn);
  }
  return r;
}

// Closed forms for *envelope* clipping of a circular complex Gaussian
// (t = v_cc^2 / (g^2 p)); these are what monte_carlo_bussgang estimates.
inline double envelope_alpha(double p, const pawf::PaParams& pa) {
  const double t = pa.v_cc * pa.v_cc / (pa.gain * pa.gain * p);
  const double rt = std::sqrt(t);
  return pa.gain * (1.0 - std::exp(-t) + std::sqrt(M_PI) / 2.0 * rt * std::erfc(rt));
}
inline double envelope_p_out(double p, const pawf::PaParams& pa) {
  const double t = pa.v_cc * pa.v_cc / (pa.gain * pa.gain * p);
  return pa.gain * pa.gain * p * (1.0 - std::exp(-t));
}

// ---------------------------------------------------------------------------
// Exact projection onto {p >= 0, sum p <= total} by KKT support enumeration.
inline Eigen::VectorXd projection_qp_oracle(const Eigen::VectorXd& x, double total) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    // Candidate A: support components free at x_i (sum constraint slack).
    // Candidate B: support components at x_i - mu on the budget hyperplane.
    for (int variant = 0; variant < 2; ++variant) {
      Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
      int support = 0;
      double sum_sup = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          ++support;
          sum_sup += x[i];
        }
      double mu = 0.0;
      if (variant == 1) {
        if (support == 0) continue;
        mu = (sum_sup - total) / support;
        if (mu < -1e-15) continue; // sum constraint multiplier must be >= 0
      }
      bool ok = true;
      double sum_p = 0;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          p[i] = x[i] - mu;
          if (p[i] < -1e-12) { ok = false; break; }
          p[i] = std::max(p[i], 0.0);
          sum_p += p[i];
        } else if (x[i] - mu > 1e-12) {
          ok = false; // zero component must have nonpositive reduced value
          break;
        }
      }
      if (!ok || sum_p > total * (1 + 1e-12) + 1e-15) continue;
      const double dist = (p - x).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = p;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random complex fixtures, independent of the channel generators under test.
inline pawf::ChannelMatrix random_channel(int n_r, int n_t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  pawf::ChannelMatrix h(n_r, n_t);
  for (int r = 0; r < n_r; ++r)
    for (int c = 0; c < n_t; ++c) h(r, c) = std::complex<double>(normal(rng), normal(rng));
  return h;
}

inline Eigen::VectorXd random_powers(int n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p[i] = std::exp(u(rng));
  return p;
}

// ---------------------------------------------------------------------------
// Extended-precision dense capacity oracle for 2x2 channels: closed-form 2x2
// determinants in complex<long double>, with the Bussgang statistics
// recomputed in long double. Entirely separate from the Eigen/Cholesky path.
inline long double capacity_2x2_longdouble(const std::complex<double> h_in[2][2],
                                           long double p0, long double p1,
                                           long double gain, long double v_cc,
                                           long double sigma_n2) {
  using C = std::complex<long double>;
  auto alpha_l = [&](long double p) -> long double {
    if (p == 0.0L) return gain;
    const long double k = v_cc / (gain * std::sqrt(2.0L * p));
    return gain * erfl(k);
  };
  auto sigma_l = [&](long double p) -> long double {
    if (p == 0.0L) return 0.0L;
    const long double k = v_cc / (gain * std::sqrt(2.0L * p));
    const long double pi_l = 3.14159265358979323846264338327950288L;
    const long double br = erfl(k) - 2.0L * k / std::sqrt(pi_l) * std::exp(-k * k);
    const long double pout = gain * gain * p * br + v_cc * v_cc * erfcl(k);
    const long double a = alpha_l(p);
    return std::max(0.0L, pout - a * a * p);
  };
  C h[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) h[r][c] = C(h_in[r][c].real(), h_in[r][c].imag());
  const long double wq[2] = {alpha_l(p0) * alpha_l(p0) * p0, alpha_l(p1) * alpha_l(p1) * p1};
  const long double wr[2] = {sigma_l(p0), sigma_l(p1)};
  C q[2][2] = {}, rr[2][2] = {};
  for (int i = 0; i < 2; ++i)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        q[r][c] += wq[i] * h[r][i] * std::conj(h[c][i]);
        rr[r][c] += wr[i] * h[r][i] * std::conj(h[c][i]);
      }
  rr[0][0] += sigma_n2;
  rr[1][1] += sigma_n2;
  C k[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) k[r][c] = q[r][c] + rr[r][c];
  auto det2 = [](C m[2][2]) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; };
  const long double ln2 = 0.693147180559945309417232121458176568L;
  return (std::log(std::abs(det2(k))) - std::log(std::abs(det2(rr)))) / ln2;
}

} // namespace testing
