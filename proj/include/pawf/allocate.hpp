#pragma once

#include <vector>

#include "pawf/mimo.hpp"

namespace pawf {

struct PgdOptions {
  int max_iters = 2000;
  double step_init = 0.0;        // 0 means P_total / (10 * N_T)
  double armijo_shrink = 0.5;    // in (0, 1)
  double armijo_slope = 1e-4;    // in (0, 1)
  double tol_rel_capacity = 1e-9;
  double tol_proj_grad = 1e-8;   // scaled by P_total
  int multistart = 2;
};

struct SolveReport {
  PowerAllocation allocation;
  double capacity = 0.0;              // bits/s/Hz at the returned allocation
  int iterations = 0;                 // accepted steps of the winning run
  std::vector<double> capacity_trace; // initial value then each accepted step
  double utilization = 0.0;           // sum(p) / P_total, in [0, 1]
  bool converged = false;
  int start_index = 0;                // which multistart won
};

/// Exact Euclidean projection onto { p : p >= 0, sum(p) <= p_total }.
/// Clips negatives first; if the sum constraint is slack the clipped vector is
/// returned unchanged, otherwise the sort-based water level mu >= 0 with
/// sum max(0, x_i - mu) = p_total is applied.
Eigen::VectorXd project_budget(const Eigen::VectorXd& p_tilde, double p_total);

struct WaterfillResult {
  PowerAllocation allocation;
  bool all_zero_channel = false; // set when every column is zero
};

/// Classical water-filling over the per-antenna effective gains
/// gamma_i = g^2 ||h_i||^2 / sigma_n2, spending the budget exactly.
/// Zero columns receive zero power.
WaterfillResult waterfill_baseline(const ChannelMatrix& h, double p_total,
                                   const NoiseModel& noise, double small_signal_gain);

/// Projected gradient ascent on the amplifier-aware capacity with Armijo
/// backtracking, from a uniform start and a saturation-capped uniform start;
/// returns the better of the two. Non-convergence is reported, not thrown.
SolveReport pgd_optimize(const ChannelMatrix& h, double p_total, const PaParams& pa,
                         const NoiseModel& noise, const PgdOptions& opts = {});

} // namespace pawf
