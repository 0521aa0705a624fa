#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "atip/atomtrap.hpp"
#include "atip/geometry.hpp"
#include "atip/io.hpp"
#include "atip/modesolver.hpp"
#include "atip/powerlab.hpp"
#include "atip/sweep.hpp"
#include "atip/thermal.hpp"
#include "atip/thinfilm.hpp"

namespace {

namespace fs = std::filesystem;
using atip::io::format_g6;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  bool verbose = false;
};

atip::io::DeviceConfig load_config_or_default(const CommonOpts& opts) {
  if (!opts.config_path.empty()) return atip::io::load_device_config(opts.config_path);
  return {};
}

void write_output(const CommonOpts& opts, const std::string& name, const std::string& content) {
  const fs::path path = fs::path(opts.out_dir) / name;
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path().string());
  atip::io::write_file_atomic(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

std::string mode_csv(const atip::modesolver::ModeSolution& mode) {
  std::ostringstream out;
  out << "x_nm,y_nm,E\n";
  for (int i = 0; i < mode.nx; ++i)
    for (int j = 0; j < mode.ny; ++j)
      out << format_g6(mode.x_nm[i]) << ',' << format_g6(mode.y_nm[j]) << ','
          << format_g6(mode.at(i, j)) << '\n';
  return out.str();
}

std::string potential_csv(const atip::atomtrap::PotentialMap& map) {
  std::ostringstream out;
  out << "x_nm,y_nm,U_uK\n";
  for (int i = 0; i < map.nx; ++i)
    for (int j = 0; j < map.ny; ++j)
      out << format_g6(map.x_nm[i]) << ',' << format_g6(map.y_nm[j]) << ','
          << format_g6(map.at(i, j)) << '\n';
  return out.str();
}

std::string field_csv(const atip::thermal::ThermalField& field) {
  std::ostringstream out;
  out << "x_um,y_um,T_K\n";
  const int mid_x = (field.nx - 1) / 2;
  const int mid_y = (field.ny - 1) / 2;
  for (int i = 0; i < field.nx; ++i)
    for (int j = 0; j < field.ny; ++j)
      out << format_g6((i - mid_x) * field.cell_um) << ','
          << format_g6((j - mid_y) * field.cell_um) << ',' << format_g6(field.at(i, j)) << '\n';
  return out.str();
}

std::string trap_record(const atip::atomtrap::TrapReport& report) {
  std::ostringstream out;
  out << "depth_uk: " << format_g6(report.depth_uk) << '\n'
      << "u_min_uk: " << format_g6(report.u_min_uk) << '\n'
      << "barrier_uk: " << format_g6(report.barrier_uk) << '\n'
      << "min_height_nm: " << format_g6(report.min_height_nm) << '\n'
      << "min_x_nm: " << format_g6(report.min_x_nm) << '\n'
      << "power_blue_mw: " << format_g6(report.power_blue_mw) << '\n'
      << "power_red_mw: " << format_g6(report.power_red_mw) << '\n';
  return out.str();
}

int cmd_mode(const CommonOpts& opts, double lambda_nm, double h_nm) {
  const auto cfg = load_config_or_default(opts);
  const auto mode = atip::modesolver::solve_mode(cfg.xsection, lambda_nm, h_nm);
  const double decay = atip::modesolver::evanescent_decay_length_nm(mode.n_eff, lambda_nm);
  std::cout << "lambda_nm: " << format_g6(lambda_nm) << "  n_eff: " << format_g6(mode.n_eff)
            << "  decay_nm: " << format_g6(decay) << '\n';
  write_output(opts, "mode_" + std::to_string(static_cast<int>(lambda_nm)) + "nm.csv",
               mode_csv(mode));
  return 0;
}

int cmd_film(const CommonOpts& opts, double n, double lambda_nm, double theta_deg,
             std::vector<double> d_nm) {
  const auto rows = atip::thinfilm::membrane_transmission_report(n, d_nm, lambda_nm, theta_deg);
  std::ostringstream out;
  out << "d_nm,T_s,T_p,T_circ\n";
  for (const auto& r : rows)
    out << format_g6(r.d_nm) << ',' << format_g6(r.t_s) << ',' << format_g6(r.t_p) << ','
        << format_g6(r.t_circ) << '\n';
  std::cout << out.str();
  std::cout << "ar_thickness_nm: "
            << format_g6(atip::thinfilm::find_ar_thickness(n, lambda_nm, theta_deg)) << '\n';
  write_output(opts, "film_report.csv", out.str());
  return 0;
}

int cmd_trap(const CommonOpts& opts, double p_blue_mw, double p_red_mw, double lambda_blue_nm,
             double lambda_red_nm, double h_nm) {
  const auto cfg = load_config_or_default(opts);
  const auto mode_blue = atip::modesolver::solve_mode(cfg.xsection, lambda_blue_nm, h_nm);
  const auto mode_red = atip::modesolver::solve_mode(cfg.xsection, lambda_red_nm, h_nm);
  const auto u_blue = atip::atomtrap::dipole_potential(
      mode_blue, p_blue_mw, atip::atomtrap::cs_ground_polarizability(lambda_blue_nm));
  const auto u_red = atip::atomtrap::dipole_potential(
      mode_red, p_red_mw, atip::atomtrap::cs_ground_polarizability(lambda_red_nm));
  auto report = atip::atomtrap::combine_and_characterize(u_blue, u_red);
  report.power_blue_mw = p_blue_mw;
  report.power_red_mw = p_red_mw;
  std::cout << trap_record(report);
  write_output(opts, "trap_report.txt", trap_record(report));
  write_output(opts, "trap_potential.csv", potential_csv(report.total));
  return 0;
}

int cmd_thermal(const CommonOpts& opts, double p_wg_mw, double cell_um) {
  const auto cfg = load_config_or_default(opts);
  const auto mask = atip::geometry::rasterize_mask(cfg.design, cfg.xsection, cell_um,
                                                   cfg.mask_options);
  atip::thermal::SolverOptions sopt{cfg.thermal_tol_k, cfg.thermal_max_iter, cfg.thermal_relax};
  const auto field = atip::thermal::steady_state_temperature(mask, cfg.material, p_wg_mw, sopt);
  std::cout << "peak_k: " << format_g6(atip::thermal::peak_temperature(field))
            << "  iterations: " << field.iterations
            << "  absorbed_mw: " << format_g6(field.absorbed_w * 1e3) << '\n';
  write_output(opts, "thermal_field.csv", field_csv(field));
  return 0;
}

int cmd_failcurve(const CommonOpts& opts, const std::string& family, std::vector<double> spans,
                  double cell_um) {
  const auto cfg = load_config_or_default(opts);
  const auto curve = atip::thermal::failure_power_curve(family, spans, cfg.xsection, cfg.material,
                                                        cell_um, cfg.mask_options);
  std::ostringstream out;
  out << "span_um,p_fail_mw\n";
  for (const auto& p : curve)
    out << format_g6(p.span_um) << ',' << format_g6(p.p_fail_mw) << '\n';
  std::cout << out.str();
  write_output(opts, "failure_curve_" + family + ".csv", out.str());
  return 0;
}

int cmd_fitloss(const CommonOpts& opts, const std::string& trace_path) {
  const auto trace = atip::io::read_scatter_trace_csv(trace_path);
  const auto fit = atip::powerlab::fit_propagation_loss(trace);
  std::cout << "alpha_db_per_cm: " << format_g6(fit.alpha_db_per_cm) << '\n'
            << "std_error_db_per_cm: " << format_g6(fit.std_error_db_per_cm) << '\n';
  std::ostringstream json;
  json << "{\"alpha_db_per_cm\": " << format_g6(fit.alpha_db_per_cm)
       << ", \"std_error_db_per_cm\": " << format_g6(fit.std_error_db_per_cm) << "}\n";
  write_output(opts, "loss_fit.json", json.str());
  return 0;
}

int cmd_sweep(const CommonOpts& opts, std::vector<double> w_wg, std::vector<double> t_wg,
              std::vector<double> t_mem, double h_nm) {
  atip::sweep::SweepSpec spec;
  if (!w_wg.empty()) spec.w_wg_um = w_wg;
  if (!t_wg.empty()) spec.t_wg_nm = t_wg;
  if (!t_mem.empty()) spec.t_mem_nm = t_mem;
  spec.h_nm = h_nm;
  const auto rows = atip::sweep::grid_sweep(spec);
  std::ostringstream out;
  out << "w_wg_um,t_wg_nm,t_mem_nm,objective,status\n";
  for (const auto& r : rows)
    out << format_g6(r.w_wg_um) << ',' << format_g6(r.t_wg_nm) << ',' << format_g6(r.t_mem_nm)
        << ',' << (r.status == "ok" ? format_g6(r.objective) : std::string("nan")) << ','
        << r.status << '\n';
  std::cout << out.str();
  write_output(opts, "sweep.csv", out.str());
  return 0;
}

int cmd_report(const CommonOpts& opts, double h_nm, double cell_um) {
  const auto cfg = load_config_or_default(opts);
  std::ostringstream summary;
  std::string resolved_config = "{}";
  if (!opts.config_path.empty()) resolved_config = atip::io::read_file(opts.config_path);
  summary << "config_hash: " << atip::io::content_hash(resolved_config) << '\n';
  summary << "config: " << resolved_config << '\n';

  // Membrane transmission table.
  const auto film =
      atip::thinfilm::membrane_transmission_report(1.76, {25.0, 50.0, 75.0}, 852.0, 45.0);
  summary << "film_t_circ_25_50_75: " << format_g6(film[0].t_circ) << ' '
          << format_g6(film[1].t_circ) << ' ' << format_g6(film[2].t_circ) << '\n';
  summary << "ar_thickness_nm: " << format_g6(atip::thinfilm::find_ar_thickness(1.76, 852.0, 45.0))
          << '\n';

  // Two-color trap at the reference geometry.
  atip::geometry::WaveguideCrossSection xs{1.6, 100.0, 50.0, 1.76, 1.0};
  const auto mode_blue = atip::modesolver::solve_mode(xs, 793.0, h_nm);
  const auto mode_red = atip::modesolver::solve_mode(xs, 937.0, h_nm);
  const auto u_blue = atip::atomtrap::dipole_potential(
      mode_blue, 3.27, atip::atomtrap::cs_ground_polarizability(793.0));
  const auto u_red = atip::atomtrap::dipole_potential(
      mode_red, 2.73, atip::atomtrap::cs_ground_polarizability(937.0));
  const auto trap = atip::atomtrap::combine_and_characterize(u_blue, u_red);
  summary << "trap_depth_uk: " << format_g6(trap.depth_uk) << '\n';
  summary << "trap_height_nm: " << format_g6(trap.min_height_nm) << '\n';

  // Calibrate (emissivity, strip width) to the 10 mW peak-temperature
  // anchors, then report peaks and failure powers with the calibrated model.
  atip::thermal::CalibrationTargets targets;
  const auto fit = atip::thermal::calibrate_emissivity_wstrip(targets, cfg.xsection,
                                                              cfg.material, cell_um,
                                                              cfg.mask_options);
  auto material = cfg.material;
  material.emissivity = fit.emissivity;
  auto mask_options = cfg.mask_options;
  mask_options.w_strip_um = fit.w_strip_um;
  summary << "calibrated_emissivity: " << format_g6(fit.emissivity) << '\n';
  summary << "calibrated_w_strip_um: " << format_g6(fit.w_strip_um) << '\n';
  summary << "peak_infinity_10mw_k: " << format_g6(fit.peak_infinity_k) << '\n';
  summary << "peak_needle_10mw_k: " << format_g6(fit.peak_needle_k) << '\n';

  // Failure-power curve per design family.
  for (const std::string family : {"straight", "hybrid_needle", "infinity"}) {
    const auto curve = atip::thermal::failure_power_curve(
        family, {125.0, 250.0, 500.0}, cfg.xsection, material, cell_um, mask_options);
    summary << "p_fail_mw_" << family << "_125_250_500:";
    for (const auto& p : curve) summary << ' ' << format_g6(p.p_fail_mw);
    summary << '\n';
  }
  std::cout << summary.str();
  write_output(opts, "report_summary.txt", summary.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suspended membrane waveguide atom-trap design toolkit"};
  app.require_subcommand(1);
  CommonOpts common;
  app.add_option("--config", common.config_path, "JSON device/material configuration");
  app.add_option("--out-dir", common.out_dir, "Output directory");
  app.add_flag("-v,--verbose", common.verbose);

  double lambda_nm = 937.0, h_nm = 10.0, n_index = 1.76, theta_deg = 45.0;
  std::vector<double> d_list{25.0, 50.0, 75.0};
  auto* mode = app.add_subcommand("mode", "Solve the fundamental quasi-TE mode");
  mode->add_option("--lambda-nm", lambda_nm);
  mode->add_option("--h-nm", h_nm);

  auto* film = app.add_subcommand("film", "Membrane transmission report");
  film->add_option("--n", n_index);
  double film_lambda = 852.0;
  film->add_option("--lambda-nm", film_lambda);
  film->add_option("--theta-deg", theta_deg);
  film->add_option("--d-nm", d_list)->delimiter(',');

  double p_blue = 3.27, p_red = 2.73, lambda_blue = 793.0, lambda_red = 937.0, trap_h = 10.0;
  auto* trap = app.add_subcommand("trap", "Two-color trap characterization");
  trap->add_option("--p-blue-mw", p_blue);
  trap->add_option("--p-red-mw", p_red);
  trap->add_option("--lambda-blue-nm", lambda_blue);
  trap->add_option("--lambda-red-nm", lambda_red);
  trap->add_option("--h-nm", trap_h);

  double p_wg = 10.0, cell_um = 5.0;
  auto* thermal = app.add_subcommand("thermal", "Steady-state temperature field");
  thermal->add_option("--p-mw", p_wg);
  thermal->add_option("--cell-um", cell_um);

  std::string family = "infinity";
  std::vector<double> spans{125.0, 250.0, 500.0};
  double fc_cell = 5.0;
  auto* failcurve = app.add_subcommand("failcurve", "Failure power vs span");
  failcurve->add_option("--family", family)
      ->check(CLI::IsMember({"straight", "hybrid_needle", "infinity"}));
  failcurve->add_option("--spans-um", spans)->delimiter(',');
  failcurve->add_option("--cell-um", fc_cell);

  std::string trace_path;
  auto* fitloss = app.add_subcommand("fitloss", "Fit propagation loss from a scatter trace");
  fitloss->add_option("trace", trace_path, "CSV trace (position_cm,intensity)")->required();

  std::vector<double> sw_w, sw_twg, sw_tmem;
  double sweep_h = 20.0;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep of trap depth per mW");
  sweep->add_option("--w-wg-um", sw_w)->delimiter(',');
  sweep->add_option("--t-wg-nm", sw_twg)->delimiter(',');
  sweep->add_option("--t-mem-nm", sw_tmem)->delimiter(',');
  sweep->add_option("--h-nm", sweep_h);

  double report_h = 10.0, report_cell = 5.0;
  auto* report = app.add_subcommand("report", "Full reproduction summary");
  report->add_option("--h-nm", report_h);
  report->add_option("--cell-um", report_cell);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mode->parsed()) return cmd_mode(common, lambda_nm, h_nm);
    if (film->parsed()) return cmd_film(common, n_index, film_lambda, theta_deg, d_list);
    if (trap->parsed())
      return cmd_trap(common, p_blue, p_red, lambda_blue, lambda_red, trap_h);
    if (thermal->parsed()) return cmd_thermal(common, p_wg, cell_um);
    if (failcurve->parsed()) return cmd_failcurve(common, family, spans, fc_cell);
    if (fitloss->parsed()) return cmd_fitloss(common, trace_path);
    if (sweep->parsed()) return cmd_sweep(common, sw_w, sw_twg, sw_tmem, sweep_h);
    if (report->parsed()) return cmd_report(common, report_h, report_cell);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << '\n';
    if (what.find("converged") != std::string::npos || what.find("diverged") != std::string::npos)
      return 2;
    return 1;
  }
  return 1;
}
