#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pawf/allocate.hpp"
#include "pawf/channel.hpp"
#include "pawf/regimes.hpp"

namespace pawf {

/// Shared knobs for the sweep experiments. All numeric CSV fields are written
/// with 17 significant digits; reruns with the same config are byte identical.
struct ExperimentConfig {
  int n_t = 32;
  int n_r = 32;
  double gain = 10.0;
  double v_cc = 1.0;
  std::vector<double> p_total_dbm_grid;  // empty -> default_p_total_grid()
  std::vector<double> sigma_n2_dbm_grid; // empty -> default_sigma_n2_grid()
  int n_slots = 200;
  std::uint64_t base_seed = 1;
  double p_total_dbm = 40.0;  // single-budget experiments
  double sigma_n2_dbm = -60.0; // timeslot noise floor (1e-9 V^2)
  std::string channel_file;   // capacity-vs-noise: use this channel instead of
                              // the seeded fixture when nonempty

  PaParams pa() const { return PaParams(gain, v_cc); }
};

std::vector<double> default_p_total_grid();
std::vector<double> default_sigma_n2_grid();

/// Sweep of alpha and sigma_eta2 over a log power grid, one curve family per
/// supply voltage. Columns: p_dbm, v_cc, alpha, sigma_eta2_dbm, p_sat_dbm.
void run_pa_curve(const std::vector<double>& v_cc_list, double p_dbm_min,
                  double p_dbm_max, int points, double gain, std::ostream& out);

/// Power-utilization grid: one PGD solve per (P_total, sigma_n2) cell on that
/// cell's seeded Rayleigh channel. Columns: p_total_dbm, sigma_n2_dbm,
/// utilization_pct, capacity, regime, p_sat_dbm. A cell whose solve throws is
/// emitted with regime "failed" and nan numeric fields.
void run_utilization_heatmap(const ExperimentConfig& cfg, std::ostream& out);

/// Capacity of PGD and water-filling (both under the nonlinear model) on one
/// fixed seeded channel as the thermal noise sweeps. Columns: sigma_n2_dbm,
/// capacity_pgd, capacity_wf, threshold_sigma_n2, regime.
void run_capacity_vs_noise(const ExperimentConfig& cfg, std::ostream& out);

enum class SlotChannel { Rayleigh, Multipath, Mixed };

SlotChannel slot_channel_from_string(const std::string& name);

/// Per-slot channel draw (multipath rank uniform on {0..20}) and both solvers.
/// Columns: slot, rank, capacity_pgd, capacity_wf.
void run_timeslot_sim(const ExperimentConfig& cfg, SlotChannel kind, std::ostream& out);

struct AllocateOutcome {
  SolveReport solve;
  double capacity_wf = 0.0;
  RegimeReport regime;
};

/// One-shot solve on a channel file; the text report goes to `report` and the
/// allocation rows (antenna, power_v2, power_dbm) optionally to a CSV.
AllocateOutcome run_allocate(const std::filesystem::path& channel_file, double p_total_dbm,
                             double sigma_n2_dbm, const PaParams& pa, std::ostream& report,
                             const std::filesystem::path& csv_out = {});

/// Same on an already-loaded channel (`label` names it in the report).
AllocateOutcome run_allocate(const ChannelMatrix& h, const std::string& label,
                             double p_total_dbm, double sigma_n2_dbm, const PaParams& pa,
                             std::ostream& report, const std::filesystem::path& csv_out = {});

} // namespace pawf
