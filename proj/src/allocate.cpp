#include "pawf/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pawf {

namespace {

void check_budget(double p_total) {
  if (!(std::isfinite(p_total) && p_total > 0.0))
    throw std::domain_error("p_total must be positive and finite");
}

struct RunResult {
  Eigen::VectorXd p;
  double capacity = 0.0;
  int iterations = 0;
  std::vector<double> trace;
  bool converged = false;
};

RunResult run_pgd(const ChannelMatrix& h, Eigen::VectorXd p, double p_total,
                  const PaParams& pa, const NoiseModel& noise, const PgdOptions& opts) {
  const double step_init =
      opts.step_init > 0.0 ? opts.step_init : p_total / (10.0 * static_cast<double>(p.size()));
  const double step_min = step_init * 1e-12;
  const double step_max = step_init * 1e6;
  constexpr int kMaxBacktracks = 80;

  RunResult res;
  res.p = project_budget(p, p_total);
  res.capacity = capacity(h, res.p, pa, noise);
  res.trace.push_back(res.capacity);

  double step = step_init;
  for (int it = 0; it < opts.max_iters; ++it) {
    const Eigen::VectorXd grad = capacity_gradient(h, res.p, pa, noise);
    const double grad_sq = grad.squaredNorm();

    // Stationarity on the feasible set: the projected step goes nowhere.
    const Eigen::VectorXd probe = project_budget(res.p + step * grad, p_total);
    if ((probe - res.p).norm() <= opts.tol_proj_grad * p_total) {
      res.converged = true;
      break;
    }

    double s = step;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks && s >= step_min; ++bt) {
      const Eigen::VectorXd cand = project_budget(res.p + s * grad, p_total);
      const double cand_cap = capacity(h, cand, pa, noise);
      if (cand_cap - res.capacity >= opts.armijo_slope * s * grad_sq) {
        const double rel_change =
            std::abs(cand_cap - res.capacity) / std::max(std::abs(res.capacity), 1e-300);
        res.p = cand;
        res.capacity = cand_cap;
        res.trace.push_back(cand_cap);
        res.iterations = it + 1;
        accepted = true;
        step = std::min(s * 2.0, step_max);
        if (rel_change < opts.tol_rel_capacity) res.converged = true;
        break;
      }
      s *= opts.armijo_shrink;
    }
    if (!accepted) {
      // No acceptable step; declare stationarity if the projected step at the
      // smallest trial is negligible, otherwise report non-convergence.
      const Eigen::VectorXd tiny = project_budget(res.p + step_min * grad, p_total);
      res.converged = (tiny - res.p).norm() <= opts.tol_proj_grad * p_total;
      break;
    }
    if (res.converged) break;
  }
  return res;
}

} // namespace

Eigen::VectorXd project_budget(const Eigen::VectorXd& p_tilde, double p_total) {
  check_budget(p_total);
  if (!p_tilde.allFinite())
    throw std::domain_error("project_budget: non-finite entries");

  Eigen::VectorXd clipped = p_tilde.cwiseMax(0.0);
  if (clipped.sum() <= p_total) return clipped;

  // Active sum constraint: exact sort-based water level on the raw input
  // (identical to thresholding the clipped vector since mu >= 0).
  std::vector<double> sorted(p_tilde.data(), p_tilde.data() + p_tilde.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumsum = 0.0;
  double mu = 0.0;
  for (std::size_t m = 0; m < sorted.size(); ++m) {
    cumsum += sorted[m];
    const double candidate = (cumsum - p_total) / static_cast<double>(m + 1);
    if (sorted[m] - candidate > 0.0) mu = candidate;
  }
  return (p_tilde.array() - mu).cwiseMax(0.0);
}

WaterfillResult waterfill_baseline(const ChannelMatrix& h, double p_total,
                                   const NoiseModel& noise, double small_signal_gain) {
  check_budget(p_total);
  if (!(std::isfinite(small_signal_gain) && small_signal_gain > 0.0))
    throw std::domain_error("waterfill_baseline: gain must be positive");
  const Eigen::Index n_t = h.cols();

  Eigen::VectorXd inv_gamma(n_t);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n_t; ++i) {
    const double col_sq = h.col(i).squaredNorm();
    if (col_sq > 0.0) {
      inv_gamma[i] = noise.sigma_n2 / (small_signal_gain * small_signal_gain * col_sq);
      active.push_back(i);
    } else {
      inv_gamma[i] = 0.0;
    }
  }

  Eigen::VectorXd p = Eigen::VectorXd::Zero(n_t);
  if (active.empty())
    return {PowerAllocation(p, p_total), true};

  // Water level over the active columns, strongest (smallest 1/gamma) first.
  std::sort(active.begin(), active.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (inv_gamma[a] != inv_gamma[b]) return inv_gamma[a] < inv_gamma[b];
    return a < b;
  });
  double cumsum = 0.0;
  double mu = 0.0;
  std::size_t n_active = 0;
  for (std::size_t m = 0; m < active.size(); ++m) {
    cumsum += inv_gamma[active[m]];
    const double candidate = (p_total + cumsum) / static_cast<double>(m + 1);
    if (candidate > inv_gamma[active[m]]) {
      mu = candidate;
      n_active = m + 1;
    }
  }
  for (std::size_t m = 0; m < n_active; ++m)
    p[active[m]] = mu - inv_gamma[active[m]];
  return {PowerAllocation(p, p_total), false};
}

SolveReport pgd_optimize(const ChannelMatrix& h, double p_total, const PaParams& pa,
                         const NoiseModel& noise, const PgdOptions& opts) {
  check_budget(p_total);
  if (!(opts.armijo_shrink > 0.0 && opts.armijo_shrink < 1.0) ||
      !(opts.armijo_slope > 0.0 && opts.armijo_slope < 1.0) || opts.max_iters < 1)
    throw std::domain_error("pgd_optimize: invalid options");
  const Eigen::Index n_t = h.cols();
  const double uniform = p_total / static_cast<double>(n_t);

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Constant(n_t, uniform));
  if (opts.multistart > 1)
    starts.push_back(
        Eigen::VectorXd::Constant(n_t, std::min(uniform, pa.saturation_power())));

  RunResult best;
  int best_start = 0;
  bool have_best = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    RunResult r = run_pgd(h, starts[s], p_total, pa, noise, opts);
    if (!have_best || r.capacity > best.capacity) {
      best = std::move(r);
      best_start = static_cast<int>(s);
      have_best = true;
    }
  }

  SolveReport report{PowerAllocation(best.p, p_total),
                     best.capacity,
                     best.iterations,
                     std::move(best.trace),
                     0.0,
                     best.converged,
                     best_start};
  report.utilization = std::clamp(best.p.sum() / p_total, 0.0, 1.0);
  return report;
}

} // namespace pawf
