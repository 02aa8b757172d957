#include "pawf/experiments.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "pawf/units.hpp"

namespace pawf {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return g;
}

int numerical_rank(const ChannelMatrix& h) {
  Eigen::JacobiSVD<ChannelMatrix> svd(h);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  const double cut = 1e-9 * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return rank;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_t < 1 || cfg.n_r < 1) throw std::invalid_argument("antenna counts must be >= 1");
  if (cfg.n_slots < 1) throw std::invalid_argument("n_slots must be >= 1");
  for (double v : cfg.p_total_dbm_grid)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite p_total grid value");
  for (double v : cfg.sigma_n2_dbm_grid)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sigma_n2 grid value");
}

} // namespace

std::vector<double> default_p_total_grid() { return linspace(-10.0, 40.0, 21); }
std::vector<double> default_sigma_n2_grid() { return linspace(-90.0, 40.0, 14); }

void run_pa_curve(const std::vector<double>& v_cc_list, double p_dbm_min,
                  double p_dbm_max, int points, double gain, std::ostream& out) {
  if (v_cc_list.empty()) throw std::invalid_argument("pa-curve needs at least one v_cc");
  if (!(p_dbm_min < p_dbm_max)) throw std::invalid_argument("empty power range");
  const std::vector<double> grid = linspace(p_dbm_min, p_dbm_max, points);
  out << "p_dbm,v_cc,alpha,sigma_eta2_dbm,p_sat_dbm\n";
  for (double v_cc : v_cc_list) {
    const PaParams pa(gain, v_cc);
    const double p_sat_dbm = watt_to_dbm(pa.saturation_power());
    for (double p_dbm : grid) {
      const double p = dbm_to_watt(p_dbm);
      out << fmt17(p_dbm) << "," << fmt17(v_cc) << "," << fmt17(alpha(p, pa)) << ","
          << fmt17(watt_to_dbm(distortion_variance(p, pa))) << "," << fmt17(p_sat_dbm)
          << "\n";
    }
  }
}

void run_utilization_heatmap(const ExperimentConfig& cfg, std::ostream& out) {
  validate(cfg);
  const auto p_grid =
      cfg.p_total_dbm_grid.empty() ? default_p_total_grid() : cfg.p_total_dbm_grid;
  const auto s_grid =
      cfg.sigma_n2_dbm_grid.empty() ? default_sigma_n2_grid() : cfg.sigma_n2_dbm_grid;
  const PaParams pa = cfg.pa();
  const double p_sat_dbm = watt_to_dbm(pa.saturation_power());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  out << "p_total_dbm,sigma_n2_dbm,utilization_pct,capacity,regime,p_sat_dbm\n";
  std::uint64_t cell = 0;
  for (double p_dbm : p_grid) {
    for (double s_dbm : s_grid) {
      const double p_total = dbm_to_watt(p_dbm);
      const double sigma_n2 = dbm_to_watt(s_dbm);
      std::string regime = "failed";
      double util_pct = nan, cap = nan;
      try {
        const ChannelSpec spec{ChannelKind::Rayleigh, cfg.n_r, cfg.n_t, 0,
                               derive_seed(cfg.base_seed, seed_purpose::kHeatmapCell, cell)};
        const ChannelMatrix h = generate(spec);
        const SolveReport rep = pgd_optimize(h, p_total, pa, NoiseModel(sigma_n2));
        util_pct = 100.0 * rep.utilization;
        cap = rep.capacity;
        const double th = noise_threshold(h, pa, p_total / cfg.n_t);
        regime = to_string(classify(sigma_n2, th).regime);
      } catch (const std::exception&) {
        // leave the cell marked failed, keep sweeping
      }
      out << fmt17(p_dbm) << "," << fmt17(s_dbm) << "," << fmt17(util_pct) << ","
          << fmt17(cap) << "," << regime << "," << fmt17(p_sat_dbm) << "\n";
      ++cell;
    }
  }
}

void run_capacity_vs_noise(const ExperimentConfig& cfg, std::ostream& out) {
  validate(cfg);
  const auto s_grid =
      cfg.sigma_n2_dbm_grid.empty() ? default_sigma_n2_grid() : cfg.sigma_n2_dbm_grid;
  const PaParams pa = cfg.pa();
  const double p_total = dbm_to_watt(cfg.p_total_dbm);
  const ChannelMatrix h =
      cfg.channel_file.empty()
          ? generate({ChannelKind::Rayleigh, cfg.n_r, cfg.n_t, 0,
                      derive_seed(cfg.base_seed, seed_purpose::kFixture, 0)})
          : read_channel(cfg.channel_file);
  const double th = noise_threshold(h, pa, p_total / static_cast<double>(h.cols()));

  out << "sigma_n2_dbm,capacity_pgd,capacity_wf,threshold_sigma_n2,regime\n";
  for (double s_dbm : s_grid) {
    const double sigma_n2 = dbm_to_watt(s_dbm);
    const NoiseModel noise(sigma_n2);
    const SolveReport rep = pgd_optimize(h, p_total, pa, noise);
    const WaterfillResult wf = waterfill_baseline(h, p_total, noise, pa.gain);
    const double cap_wf = capacity(h, wf.allocation, pa, noise);
    out << fmt17(s_dbm) << "," << fmt17(rep.capacity) << "," << fmt17(cap_wf) << ","
        << fmt17(th) << "," << to_string(classify(sigma_n2, th).regime) << "\n";
  }
}

SlotChannel slot_channel_from_string(const std::string& name) {
  if (name == "rayleigh") return SlotChannel::Rayleigh;
  if (name == "multipath") return SlotChannel::Multipath;
  if (name == "mixed") return SlotChannel::Mixed;
  throw std::invalid_argument("unknown channel family '" + name +
                              "' (expected rayleigh|multipath|mixed)");
}

void run_timeslot_sim(const ExperimentConfig& cfg, SlotChannel kind, std::ostream& out) {
  validate(cfg);
  const PaParams pa = cfg.pa();
  const double p_total = dbm_to_watt(cfg.p_total_dbm);
  const NoiseModel noise(dbm_to_watt(cfg.sigma_n2_dbm));
  const int max_paths = std::min({20, cfg.n_r, cfg.n_t});

  out << "slot,rank,capacity_pgd,capacity_wf\n";
  for (int slot = 0; slot < cfg.n_slots; ++slot) {
    const bool multipath =
        kind == SlotChannel::Multipath ||
        (kind == SlotChannel::Mixed && slot >= cfg.n_slots / 2);
    ChannelSpec spec;
    spec.n_r = cfg.n_r;
    spec.n_t = cfg.n_t;
    spec.seed = derive_seed(cfg.base_seed, seed_purpose::kTimeslot,
                            static_cast<std::uint64_t>(slot));
    if (multipath) {
      spec.kind = ChannelKind::Multipath;
      std::mt19937_64 lrng(derive_seed(cfg.base_seed, seed_purpose::kPathCount,
                                       static_cast<std::uint64_t>(slot)));
      spec.n_paths = static_cast<int>(
          std::uniform_int_distribution<int>(0, max_paths)(lrng));
    }
    const ChannelMatrix h = generate(spec);
    const int rank = numerical_rank(h);
    const SolveReport rep = pgd_optimize(h, p_total, pa, noise);
    const WaterfillResult wf = waterfill_baseline(h, p_total, noise, pa.gain);
    const double cap_wf = capacity(h, wf.allocation, pa, noise);
    out << slot << "," << rank << "," << fmt17(rep.capacity) << "," << fmt17(cap_wf)
        << "\n";
  }
}

AllocateOutcome run_allocate(const std::filesystem::path& channel_file, double p_total_dbm,
                             double sigma_n2_dbm, const PaParams& pa, std::ostream& report,
                             const std::filesystem::path& csv_out) {
  return run_allocate(read_channel(channel_file), channel_file.string(), p_total_dbm,
                      sigma_n2_dbm, pa, report, csv_out);
}

AllocateOutcome run_allocate(const ChannelMatrix& h, const std::string& label,
                             double p_total_dbm, double sigma_n2_dbm, const PaParams& pa,
                             std::ostream& report, const std::filesystem::path& csv_out) {
  const double p_total = dbm_to_watt(p_total_dbm);
  const NoiseModel noise(dbm_to_watt(sigma_n2_dbm));

  AllocateOutcome o{pgd_optimize(h, p_total, pa, noise), 0.0, {}};
  const WaterfillResult wf = waterfill_baseline(h, p_total, noise, pa.gain);
  o.capacity_wf = capacity(h, wf.allocation, pa, noise);
  const double th = noise_threshold(h, pa, p_total / static_cast<double>(h.cols()));
  o.regime = classify(noise.sigma_n2, th);

  report << "channel: " << h.rows() << "x" << h.cols() << " from " << label << "\n"
         << "p_total: " << fmt17(p_total) << " V^2 (" << fmt17(p_total_dbm) << " dBm)\n"
         << "sigma_n2: " << fmt17(noise.sigma_n2) << " V^2\n"
         << "capacity_pgd: " << fmt17(o.solve.capacity) << " bits/s/Hz\n"
         << "capacity_wf: " << fmt17(o.capacity_wf) << " bits/s/Hz\n"
         << "utilization_pct: " << fmt17(100.0 * o.solve.utilization) << "\n"
         << "iterations: " << o.solve.iterations << "\n"
         << "converged: " << (o.solve.converged ? "yes" : "no") << "\n"
         << "threshold_sigma_n2: " << fmt17(th) << " V^2\n"
         << "regime: " << to_string(o.regime.regime) << "\n"
         << "allocation:";
  for (Eigen::Index i = 0; i < o.solve.allocation.powers.size(); ++i)
    report << " " << fmt17(o.solve.allocation.powers[i]);
  report << "\n";

  if (!csv_out.empty()) {
    std::ofstream csv(csv_out);
    if (!csv) throw std::runtime_error("cannot open '" + csv_out.string() + "' for writing");
    csv << "antenna,power_v2,power_dbm\n";
    for (Eigen::Index i = 0; i < o.solve.allocation.powers.size(); ++i) {
      const double p = o.solve.allocation.powers[i];
      csv << i << "," << fmt17(p) << "," << fmt17(watt_to_dbm(p)) << "\n";
    }
  }
  return o;
}

} // namespace pawf
