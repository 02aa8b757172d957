#include "pawf/mimo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace pawf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_dims(const ChannelMatrix& h, const Eigen::VectorXd& powers) {
  if (h.rows() < 1 || h.cols() < 1)
    throw std::invalid_argument("channel matrix must be at least 1x1");
  if (powers.size() != h.cols())
    throw std::invalid_argument("power vector length does not match channel columns");
  if (!h.allFinite() || !powers.allFinite())
    throw std::invalid_argument("non-finite channel or power entries");
}

struct BussgangBank {
  Eigen::VectorXd alpha2p;   // alpha_i^2 * P_i
  Eigen::VectorXd sigma;     // sigma_eta2(P_i)
  Eigen::VectorXd dq;        // d(alpha_i^2 P_i)/dP_i
  Eigen::VectorXd dsigma;    // d sigma_eta2 / dP_i
};

BussgangBank evaluate_bank(const Eigen::VectorXd& powers,
                           const PaParams* uniform,
                           const std::vector<PaParams>* bank) {
  const Eigen::Index n = powers.size();
  if (bank && static_cast<Eigen::Index>(bank->size()) != n)
    throw std::invalid_argument("amplifier bank size does not match antenna count");
  BussgangBank out;
  out.alpha2p.resize(n);
  out.sigma.resize(n);
  out.dq.resize(n);
  out.dsigma.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PaParams& pa = bank ? (*bank)[static_cast<std::size_t>(i)] : *uniform;
    if (powers[i] < 0.0)
      throw std::domain_error("negative per-antenna power");
    const BussgangPoint b = bussgang_point(powers[i], pa);
    out.alpha2p[i] = b.alpha * b.alpha * b.power;
    out.sigma[i] = b.sigma_eta2;
    out.dq[i] = b.alpha * b.alpha + 2.0 * b.alpha * b.power * b.d_alpha_dp;
    out.dsigma[i] = b.d_sigma_eta2_dp;
  }
  return out;
}

ComplexMatrix weighted_gram(const ChannelMatrix& h, const Eigen::VectorXd& w) {
  ComplexMatrix m = h * w.asDiagonal() * h.adjoint();
  m = ((m + m.adjoint()) * 0.5).eval();
  return m;
}

// log2 det of a Hermitian positive definite matrix. Cholesky first; if that
// reports failure, fall back to eigenvalues and diagnose indefiniteness.
double log2det_hpd(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite())
    throw std::runtime_error(std::string("log-det: non-finite entries in ") + what);
  Eigen::LLT<ComplexMatrix> llt(m);
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log2(l(i, i).real());
    return 2.0 * acc;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string("log-det: eigendecomposition failed for ") + what);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev <= 0.0)
      throw std::runtime_error(std::string("log-det: ") + what +
                               " is not positive definite (eigenvalue " +
                               std::to_string(ev) + ")");
    acc += std::log2(ev);
  }
  return acc;
}

ComplexMatrix covariance_impl(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                              const PaParams* uniform, const std::vector<PaParams>* bank,
                              const NoiseModel& noise) {
  check_dims(h, powers);
  const BussgangBank bb = evaluate_bank(powers, uniform, bank);
  ComplexMatrix r = weighted_gram(h, bb.sigma);
  r.diagonal().array() += noise.sigma_n2;
  return r;
}

double capacity_impl(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                     const PaParams* uniform, const std::vector<PaParams>* bank,
                     const NoiseModel& noise) {
  check_dims(h, powers);
  const BussgangBank bb = evaluate_bank(powers, uniform, bank);
  ComplexMatrix r = weighted_gram(h, bb.sigma);
  r.diagonal().array() += noise.sigma_n2;
  ComplexMatrix k = r + weighted_gram(h, bb.alpha2p);
  k = ((k + k.adjoint()) * 0.5).eval();
  const double c = log2det_hpd(k, "K") - log2det_hpd(r, "R_eff");
  return c > 0.0 ? c : 0.0;
}

Eigen::VectorXd gradient_impl(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                              const PaParams* uniform, const std::vector<PaParams>* bank,
                              const NoiseModel& noise) {
  check_dims(h, powers);
  const BussgangBank bb = evaluate_bank(powers, uniform, bank);
  ComplexMatrix r = weighted_gram(h, bb.sigma);
  r.diagonal().array() += noise.sigma_n2;
  ComplexMatrix k = r + weighted_gram(h, bb.alpha2p);
  k = ((k + k.adjoint()) * 0.5).eval();

  Eigen::LLT<ComplexMatrix> llt_k(k), llt_r(r);
  if (llt_k.info() != Eigen::Success || llt_r.info() != Eigen::Success)
    throw std::runtime_error("capacity_gradient: Cholesky factorization failed");

  const Eigen::Index n_t = h.cols();
  Eigen::VectorXd grad(n_t);
  for (Eigen::Index i = 0; i < n_t; ++i) {
    const Eigen::VectorXcd hi = h.col(i);
    const double u = hi.dot(llt_k.solve(hi)).real(); // h^H K^-1 h
    const double w = hi.dot(llt_r.solve(hi)).real(); // h^H R^-1 h
    grad[i] = (bb.dq[i] * u - bb.dsigma[i] * (w - u)) / kLn2;
  }
  return grad;
}

} // namespace

NoiseModel::NoiseModel(double sigma_n2_) : sigma_n2(sigma_n2_) {
  if (!(std::isfinite(sigma_n2) && sigma_n2 > 0.0))
    throw std::domain_error("NoiseModel.sigma_n2 must be positive and finite");
}

PowerAllocation::PowerAllocation(Eigen::VectorXd powers_, double budget_)
    : powers(std::move(powers_)), budget(budget_) {
  if (!(std::isfinite(budget) && budget > 0.0))
    throw std::domain_error("PowerAllocation.budget must be positive and finite");
  if (!powers.allFinite())
    throw std::domain_error("PowerAllocation entries must be finite");
  for (Eigen::Index i = 0; i < powers.size(); ++i)
    if (powers[i] < 0.0) throw std::domain_error("PowerAllocation entries must be nonnegative");
  if (powers.sum() > budget * (1.0 + 1e-9))
    throw std::domain_error("PowerAllocation exceeds its budget");
}

double frobenius_norm_sq(const ChannelMatrix& h) { return h.squaredNorm(); }

ComplexMatrix effective_noise_covariance(const ChannelMatrix& h,
                                         const Eigen::VectorXd& powers,
                                         const PaParams& pa, const NoiseModel& noise) {
  return covariance_impl(h, powers, &pa, nullptr, noise);
}

ComplexMatrix effective_noise_covariance(const ChannelMatrix& h,
                                         const Eigen::VectorXd& powers,
                                         const std::vector<PaParams>& bank,
                                         const NoiseModel& noise) {
  return covariance_impl(h, powers, nullptr, &bank, noise);
}

double capacity(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                const PaParams& pa, const NoiseModel& noise) {
  return capacity_impl(h, powers, &pa, nullptr, noise);
}

double capacity(const ChannelMatrix& h, const PowerAllocation& alloc,
                const PaParams& pa, const NoiseModel& noise) {
  return capacity_impl(h, alloc.powers, &pa, nullptr, noise);
}

double capacity(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                const std::vector<PaParams>& bank, const NoiseModel& noise) {
  return capacity_impl(h, powers, nullptr, &bank, noise);
}

Eigen::VectorXd capacity_gradient(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                                  const PaParams& pa, const NoiseModel& noise) {
  return gradient_impl(h, powers, &pa, nullptr, noise);
}

Eigen::VectorXd capacity_gradient(const ChannelMatrix& h, const Eigen::VectorXd& powers,
                                  const std::vector<PaParams>& bank, const NoiseModel& noise) {
  return gradient_impl(h, powers, nullptr, &bank, noise);
}

} // namespace pawf
