#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pawf/experiments.hpp"

namespace {

struct CommonOpts {
  pawf::ExperimentConfig cfg;
  std::string out;
  std::string config_file;
};

void add_common(CLI::App* cmd, CommonOpts& c, const std::string& default_out) {
  c.out = default_out;
  cmd->add_option("--gain", c.cfg.gain, "PA small-signal gain G")->capture_default_str();
  cmd->add_option("--vcc", c.cfg.v_cc, "PA supply voltage V_CC in volts")
      ->capture_default_str();
  cmd->add_option("--nt", c.cfg.n_t, "transmit antennas")->capture_default_str();
  cmd->add_option("--nr", c.cfg.n_r, "receive antennas")->capture_default_str();
  cmd->add_option("--seed", c.cfg.base_seed, "base seed for channel draws")
      ->capture_default_str();
  cmd->add_option("--out", c.out, "output CSV path")->capture_default_str();
  cmd->add_option("--config", c.config_file, "flat key=value config file");
}

// Flat key=value config support with CLI-over-config precedence: each config
// entry becomes a --key=value token unless the same flag was given explicitly,
// so every option has exactly one source (CLI beats config beats defaults).
std::vector<std::string> config_tokens(const std::string& path,
                                       const std::vector<std::string>& cli_args) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(start, end - start + 1);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::FileError(path + ":" + std::to_string(line_no) +
                           ": expected key=value, got '" + line + "'");
    const std::string flag = "--" + line.substr(0, eq);
    const bool on_cli = std::any_of(cli_args.begin(), cli_args.end(), [&](const auto& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!on_cli) tokens.push_back(flag + "=" + line.substr(eq + 1));
  }
  return tokens;
}

std::vector<std::string> with_config_applied(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty() || args.empty()) return args;
  std::vector<std::string> merged{args[0]}; // the subcommand name
  for (const auto& tok : config_tokens(config, args)) merged.push_back(tok);
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bussgang statistics of hard-limiting amplifiers, MIMO capacity under\n"
      "signal-dependent distortion, and amplifier-aware power allocation.\n"
      "Powers use the 1-ohm convention (V^2 == W), so dBm = 10*log10(p/1e-3)."};
  app.require_subcommand(1);

  // pa-curve
  CommonOpts pc;
  std::vector<double> vcc_list{0.5, 1.0, 1.5};
  double pdbm_min = -30.0, pdbm_max = 30.0;
  int points = 121;
  auto* pa_curve = app.add_subcommand("pa-curve", "sweep alpha and sigma_eta2 vs input power");
  add_common(pa_curve, pc, "pa_curve.csv");
  pa_curve->add_option("--vcc-list", vcc_list, "supply voltages, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  pa_curve->add_option("--pdbm-min", pdbm_min, "lowest input power, dBm")->capture_default_str();
  pa_curve->add_option("--pdbm-max", pdbm_max, "highest input power, dBm")->capture_default_str();
  pa_curve->add_option("--points", points, "grid points")->capture_default_str();

  // utilization-heatmap
  CommonOpts hm;
  auto* heatmap =
      app.add_subcommand("utilization-heatmap", "PGD power utilization over a (P_total, sigma_n2) grid");
  add_common(heatmap, hm, "utilization_heatmap.csv");
  heatmap->add_option("--ptotal-dbm-grid", hm.cfg.p_total_dbm_grid,
                      "budget grid in dBm, comma separated")
      ->delimiter(',');
  heatmap->add_option("--sigma-n2-dbm-grid", hm.cfg.sigma_n2_dbm_grid,
                      "noise grid in dBm, comma separated")
      ->delimiter(',');

  // capacity-vs-noise
  CommonOpts cn;
  auto* cap_noise =
      app.add_subcommand("capacity-vs-noise", "PGD and water-filling capacity vs thermal noise");
  add_common(cap_noise, cn, "capacity_vs_noise.csv");
  cap_noise->add_option("--ptotal-dbm", cn.cfg.p_total_dbm, "transmit power budget, dBm")
      ->capture_default_str();
  cap_noise->add_option("--sigma-n2-dbm-grid", cn.cfg.sigma_n2_dbm_grid,
                        "noise grid in dBm, comma separated")
      ->delimiter(',');
  cap_noise->add_option("--channel-file", cn.cfg.channel_file,
                        "sweep this channel instead of the seeded fixture");

  // timeslot-sim
  CommonOpts ts;
  std::string channel_family = "multipath";
  auto* timeslot = app.add_subcommand("timeslot-sim", "channel rank and capacity over time slots");
  add_common(timeslot, ts, "timeslot_sim.csv");
  timeslot->add_option("--slots", ts.cfg.n_slots, "number of time slots")->capture_default_str();
  timeslot->add_option("--ptotal-dbm", ts.cfg.p_total_dbm, "transmit power budget, dBm")
      ->capture_default_str();
  timeslot->add_option("--sigma-n2-dbm", ts.cfg.sigma_n2_dbm, "thermal noise, dBm")
      ->capture_default_str();
  timeslot->add_option("--channel", channel_family, "rayleigh|multipath|mixed")
      ->capture_default_str();

  // allocate
  CommonOpts al;
  std::string channel_file;
  double al_ptotal_dbm = 40.0, al_sigma_dbm = -60.0;
  auto* allocate = app.add_subcommand("allocate", "one-shot solve on a channel file");
  allocate->add_option("--gain", al.cfg.gain, "PA small-signal gain G")->capture_default_str();
  allocate->add_option("--vcc", al.cfg.v_cc, "PA supply voltage V_CC in volts")
      ->capture_default_str();
  allocate->add_option("--channel-file", channel_file, "channel CSV")->required();
  allocate->add_option("--ptotal-dbm", al_ptotal_dbm, "transmit power budget, dBm")
      ->capture_default_str();
  allocate->add_option("--sigma-n2-dbm", al_sigma_dbm, "thermal noise, dBm")
      ->capture_default_str();
  allocate->add_option("--out", al.out, "optional allocation CSV");
  allocate->add_option("--config", al.config_file, "flat key=value config file");

  try {
    auto args = with_config_applied(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*pa_curve) {
      auto out = open_out(pc.out);
      pawf::run_pa_curve(vcc_list, pdbm_min, pdbm_max, points, pc.cfg.gain, out);
      std::cout << "wrote " << pc.out << "\n";
    } else if (*heatmap) {
      auto out = open_out(hm.out);
      pawf::run_utilization_heatmap(hm.cfg, out);
      std::cout << "wrote " << hm.out << "\n";
    } else if (*cap_noise) {
      auto out = open_out(cn.out);
      pawf::run_capacity_vs_noise(cn.cfg, out);
      std::cout << "wrote " << cn.out << "\n";
    } else if (*timeslot) {
      const pawf::SlotChannel kind = pawf::slot_channel_from_string(channel_family);
      auto out = open_out(ts.out);
      pawf::run_timeslot_sim(ts.cfg, kind, out);
      std::cout << "wrote " << ts.out << "\n";
    } else if (*allocate) {
      pawf::ChannelMatrix h;
      try {
        h = pawf::read_channel(channel_file);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      pawf::run_allocate(h, channel_file, al_ptotal_dbm, al_sigma_dbm,
                         pawf::PaParams(al.cfg.gain, al.cfg.v_cc), std::cout, al.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
