#pragma once

#include <Eigen/Dense>

#include <vector>

#include "pawf/pa.hpp"

namespace pawf {

using ComplexMatrix = Eigen::MatrixXcd; // row/col counts live in the Eigen type

/// N_R x N_T channel; column i is the spatial signature of transmit antenna i.
using ChannelMatrix = Eigen::MatrixXcd;

/// Thermal noise at the receive array, sigma_n2 per antenna (V^2).
struct NoiseModel {
  double sigma_n2;
  explicit NoiseModel(double sigma_n2_);
};

/// Nonnegative per-antenna powers plus the budget they were allocated under.
struct PowerAllocation {
  Eigen::VectorXd powers; // length N_T, V^2 each
  double budget;          // P_total, V^2

  PowerAllocation(Eigen::VectorXd powers_, double budget_);

  double total() const { return powers.sum(); }
  double utilization() const { return total() / budget; }
};

/// Sum of squared entry magnitudes.
double frobenius_norm_sq(const ChannelMatrix& h);

/// R_eff(p) = sum_i sigma_eta2(P_i) h_i h_i^H + sigma_n2 I. Hermitian positive
/// definite; symmetrized after accumulation.
ComplexMatrix effective_noise_covariance(const ChannelMatrix& h,
                                         const Eigen::VectorXd& powers,
                                         const PaParams& pa,
                                         const NoiseModel& noise);

/// Capacity log2 det(K) - log2 det(R_eff) with K = R_eff + sum_i alpha_i^2 P_i h_i h_i^H,
/// in bits/s/Hz, evaluated through complex Cholesky factorizations (eigenvalue
/// fallback if factorization fails). Throws on non-finite inputs.
double capacity(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                const PaParams& pa, const NoiseModel& noise);

double capacity(const ChannelMatrix& h, const PowerAllocation& alloc,
                const PaParams& pa, const NoiseModel& noise);

/// dC/dP_i for every antenna. Uses the rank-one structure of dQ/dP_i and
/// dR_eff/dP_i, so each component costs two triangular solves:
///   dC/dP_i = [q_i' * h_i^H K^{-1} h_i - s_i' * (h_i^H R^{-1} h_i - h_i^H K^{-1} h_i)] / ln 2
/// with q_i' = alpha_i^2 + 2 alpha_i P_i alpha_i' and s_i' = d sigma_eta2 / dP.
/// Components at P_i = 0 use the limit conventions alpha_i = G, q_i' = G^2, s_i' = 0.
Eigen::VectorXd capacity_gradient(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                                  const PaParams& pa, const NoiseModel& noise);

/// Per-antenna amplifier bank variants (one PaParams per transmit chain).
ComplexMatrix effective_noise_covariance(const ChannelMatrix& h,
                                         const Eigen::VectorXd& powers,
                                         const std::vector<PaParams>& bank,
                                         const NoiseModel& noise);
double capacity(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                const std::vector<PaParams>& bank, const NoiseModel& noise);
Eigen::VectorXd capacity_gradient(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                                  const std::vector<PaParams>& bank, const NoiseModel& noise);

} // namespace pawf
