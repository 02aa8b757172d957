#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

#include "pawf/experiments.hpp"
#include "pawf/units.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

std::ofstream checked_ofstream(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

pawf::ChannelKind kind_from_string(const std::string& name) {
  if (name == "rayleigh") return pawf::ChannelKind::Rayleigh;
  if (name == "multipath") return pawf::ChannelKind::Multipath;
  throw std::invalid_argument("unknown channel kind '" + name + "'");
}

} // namespace

PYBIND11_MODULE(pawf, m) {
  m.doc() = "Bussgang statistics of hard-limiting amplifiers, MIMO capacity under "
            "signal-dependent distortion, and amplifier-aware power allocation. "
            "Powers use the 1-ohm convention (V^2 == W).";

  py::class_<pawf::PaParams>(m, "PaParams")
      .def(py::init<double, double>(), "gain"_a, "v_cc"_a)
      .def_readonly("gain", &pawf::PaParams::gain)
      .def_readonly("v_cc", &pawf::PaParams::v_cc)
      .def("saturation_power", &pawf::PaParams::saturation_power)
      .def("__repr__", [](const pawf::PaParams& p) {
        return "PaParams(gain=" + std::to_string(p.gain) +
               ", v_cc=" + std::to_string(p.v_cc) + ")";
      });

  py::class_<pawf::BussgangPoint>(m, "BussgangPoint")
      .def_readonly("power", &pawf::BussgangPoint::power)
      .def_readonly("alpha", &pawf::BussgangPoint::alpha)
      .def_readonly("p_out", &pawf::BussgangPoint::p_out)
      .def_readonly("sigma_eta2", &pawf::BussgangPoint::sigma_eta2)
      .def_readonly("d_alpha_dp", &pawf::BussgangPoint::d_alpha_dp)
      .def_readonly("d_sigma_eta2_dp", &pawf::BussgangPoint::d_sigma_eta2_dp);

  py::class_<pawf::McEstimate>(m, "McEstimate")
      .def_readonly("alpha_hat", &pawf::McEstimate::alpha_hat)
      .def_readonly("sigma_eta2_hat", &pawf::McEstimate::sigma_eta2_hat)
      .def_readonly("p_out_hat", &pawf::McEstimate::p_out_hat)
      .def_readonly("n_samples", &pawf::McEstimate::n_samples)
      .def_readonly("se_alpha", &pawf::McEstimate::se_alpha)
      .def_readonly("se_sigma_eta2", &pawf::McEstimate::se_sigma_eta2)
      .def_readonly("se_p_out", &pawf::McEstimate::se_p_out)
      .def_readonly("residual_corr", &pawf::McEstimate::residual_corr)
      .def_readonly("se_residual", &pawf::McEstimate::se_residual);

  m.def("clip_transfer", &pawf::clip_transfer, "r"_a, "pa"_a);
  m.def("alpha", &pawf::alpha, "p"_a, "pa"_a);
  m.def("output_power", &pawf::output_power, "p"_a, "pa"_a);
  m.def("distortion_variance", &pawf::distortion_variance, "p"_a, "pa"_a);
  m.def("alpha_gradient", &pawf::alpha_gradient, "p"_a, "pa"_a);
  m.def("distortion_gradient", &pawf::distortion_gradient, "p"_a, "pa"_a);
  m.def("saturation_power", py::overload_cast<const pawf::PaParams&>(&pawf::saturation_power),
        "pa"_a);
  m.def("bussgang_point", &pawf::bussgang_point, "p"_a, "pa"_a);
  m.def("monte_carlo_bussgang", &pawf::monte_carlo_bussgang, "p"_a, "pa"_a, "n_samples"_a,
        "seed"_a);

  m.def("frobenius_norm_sq", &pawf::frobenius_norm_sq, "h"_a);
  m.def(
      "effective_noise_covariance",
      [](const pawf::ChannelMatrix& h, const Eigen::VectorXd& p, const pawf::PaParams& pa,
         double sigma_n2) {
        return pawf::effective_noise_covariance(h, p, pa, pawf::NoiseModel(sigma_n2));
      },
      "h"_a, "powers"_a, "pa"_a, "sigma_n2"_a);
  m.def(
      "capacity",
      [](const pawf::ChannelMatrix& h, const Eigen::VectorXd& p, const pawf::PaParams& pa,
         double sigma_n2) { return pawf::capacity(h, p, pa, pawf::NoiseModel(sigma_n2)); },
      "h"_a, "powers"_a, "pa"_a, "sigma_n2"_a);
  m.def(
      "capacity_gradient",
      [](const pawf::ChannelMatrix& h, const Eigen::VectorXd& p, const pawf::PaParams& pa,
         double sigma_n2) {
        return pawf::capacity_gradient(h, p, pa, pawf::NoiseModel(sigma_n2));
      },
      "h"_a, "powers"_a, "pa"_a, "sigma_n2"_a);

  m.def(
      "generate_channel",
      [](const std::string& kind, int n_r, int n_t, std::uint64_t seed, int n_paths) {
        return pawf::generate({kind_from_string(kind), n_r, n_t, n_paths, seed});
      },
      "kind"_a, "n_r"_a, "n_t"_a, "seed"_a, "n_paths"_a = 1);
  m.def("read_channel", &pawf::read_channel, "path"_a);
  m.def("write_channel", &pawf::write_channel, "h"_a, "path"_a);
  m.def("derive_seed", &pawf::derive_seed, "base"_a, "purpose"_a, "index"_a);

  m.def("project_budget", &pawf::project_budget, "p_tilde"_a, "p_total"_a);
  m.def(
      "waterfill_baseline",
      [](const pawf::ChannelMatrix& h, double p_total, double sigma_n2, double gain) {
        return pawf::waterfill_baseline(h, p_total, pawf::NoiseModel(sigma_n2), gain)
            .allocation.powers;
      },
      "h"_a, "p_total"_a, "sigma_n2"_a, "gain"_a);

  py::class_<pawf::PgdOptions>(m, "PgdOptions")
      .def(py::init<>())
      .def_readwrite("max_iters", &pawf::PgdOptions::max_iters)
      .def_readwrite("step_init", &pawf::PgdOptions::step_init)
      .def_readwrite("armijo_shrink", &pawf::PgdOptions::armijo_shrink)
      .def_readwrite("armijo_slope", &pawf::PgdOptions::armijo_slope)
      .def_readwrite("tol_rel_capacity", &pawf::PgdOptions::tol_rel_capacity)
      .def_readwrite("tol_proj_grad", &pawf::PgdOptions::tol_proj_grad)
      .def_readwrite("multistart", &pawf::PgdOptions::multistart);

  py::class_<pawf::SolveReport>(m, "SolveReport")
      .def_property_readonly("powers",
                             [](const pawf::SolveReport& r) { return r.allocation.powers; })
      .def_readonly("capacity", &pawf::SolveReport::capacity)
      .def_readonly("iterations", &pawf::SolveReport::iterations)
      .def_readonly("capacity_trace", &pawf::SolveReport::capacity_trace)
      .def_readonly("utilization", &pawf::SolveReport::utilization)
      .def_readonly("converged", &pawf::SolveReport::converged)
      .def_readonly("start_index", &pawf::SolveReport::start_index);

  m.def(
      "pgd_optimize",
      [](const pawf::ChannelMatrix& h, double p_total, const pawf::PaParams& pa,
         double sigma_n2, const pawf::PgdOptions& opts) {
        return pawf::pgd_optimize(h, p_total, pa, pawf::NoiseModel(sigma_n2), opts);
      },
      "h"_a, "p_total"_a, "pa"_a, "sigma_n2"_a, "opts"_a = pawf::PgdOptions{});

  py::class_<pawf::RegimeReport>(m, "RegimeReport")
      .def_readonly("threshold_sigma_n2", &pawf::RegimeReport::threshold_sigma_n2)
      .def_readonly("ratio", &pawf::RegimeReport::ratio)
      .def_property_readonly(
          "regime", [](const pawf::RegimeReport& r) { return pawf::to_string(r.regime); });

  m.def("noise_threshold", &pawf::noise_threshold, "h"_a, "pa"_a, "p_avg"_a);
  m.def("classify", &pawf::classify, "sigma_n2"_a, "threshold"_a, "band"_a = 3.0);

  m.def("watt_to_dbm", &pawf::watt_to_dbm, "p"_a);
  m.def("dbm_to_watt", &pawf::dbm_to_watt, "dbm"_a);

  m.def(
      "run_pa_curve",
      [](const std::vector<double>& vcc_list, double p_dbm_min, double p_dbm_max, int points,
         double gain, const std::filesystem::path& out) {
        auto f = checked_ofstream(out);
        pawf::run_pa_curve(vcc_list, p_dbm_min, p_dbm_max, points, gain, f);
      },
      "v_cc_list"_a, "p_dbm_min"_a, "p_dbm_max"_a, "points"_a, "gain"_a, "out"_a);

  m.attr("__version__") = "0.1.0";
}
