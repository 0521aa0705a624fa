#include "atip/atomtrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "atip/constants.hpp"

namespace atip::atomtrap {

namespace constants = atip::constants;

Polarizability cs_ground_polarizability(double lambda_nm, const CsLineData& lines) {
  if (std::abs(lambda_nm - lines.lambda_d1_nm) < 1.0 ||
      std::abs(lambda_nm - lines.lambda_d2_nm) < 1.0)
    throw std::invalid_argument("wavelength within 1 nm of a Cs D line");
  const double omega = 2.0 * constants::pi * constants::c_light / (lambda_nm * 1e-9);
  const double prefac = 3.0 * constants::pi * constants::eps0 *
                        constants::c_light * constants::c_light * constants::c_light;
  double alpha = 0.0;
  const struct {
    double lambda_nm;
    double gamma;
    double weight;
  } terms[] = {{lines.lambda_d1_nm, lines.gamma_d1, 1.0 / 3.0},
               {lines.lambda_d2_nm, lines.gamma_d2, 2.0 / 3.0}};
  for (const auto& t : terms) {
    const double omega0 = 2.0 * constants::pi * constants::c_light / (t.lambda_nm * 1e-9);
    alpha += t.weight * prefac * (t.gamma / (omega0 * omega0 * omega0)) *
             (1.0 / (omega0 - omega) + 1.0 / (omega0 + omega));
  }
  return {lambda_nm, alpha};
}

PotentialMap dipole_potential(const modesolver::ModeSolution& mode, double power_mw,
                              const Polarizability& alpha) {
  if (power_mw < 0) throw std::invalid_argument("power must be >= 0");
  if (std::abs(alpha.lambda_nm - mode.lambda_nm) > 1e-6)
    throw std::invalid_argument("polarizability wavelength does not match the mode");
  PotentialMap map;
  map.nx = mode.nx;
  map.ny = mode.ny;
  map.x_nm = mode.x_nm;
  map.y_nm = mode.y_nm;
  map.surface_y_nm = mode.surface_y_nm;
  map.u_uk.resize(mode.field.size());
  // I(x,y) for the 1 mW-normalized field, scaled by power_mw.
  const double intensity_fac = 0.5 * mode.n_eff * constants::eps0 * constants::c_light * power_mw;
  const double u_fac = -alpha.alpha_si / (2.0 * constants::eps0 * constants::c_light) /
                       constants::k_boltzmann * 1e6;  // J -> uK
  for (std::size_t i = 0; i < mode.field.size(); ++i) {
    const double intensity = intensity_fac * mode.field[i] * mode.field[i];
    map.u_uk[i] = u_fac * intensity;
  }
  return map;
}

namespace {

// Vertex of the parabola through three equally spaced samples.
void quadratic_refine(double ym, double y0, double yp, double step, double& dx, double& val) {
  const double denom = ym - 2.0 * y0 + yp;
  if (std::abs(denom) < 1e-300) {
    dx = 0.0;
    val = y0;
    return;
  }
  dx = 0.5 * (ym - yp) / denom * step;
  val = y0 - 0.125 * (ym - yp) * (ym - yp) / denom;
}

}  // namespace

TrapReport combine_and_characterize(const PotentialMap& u_blue, const PotentialMap& u_red) {
  if (u_blue.nx != u_red.nx || u_blue.ny != u_red.ny)
    throw std::invalid_argument("grid mismatch between potential maps");
  TrapReport report;
  report.total = u_blue;
  for (std::size_t i = 0; i < report.total.u_uk.size(); ++i)
    report.total.u_uk[i] += u_red.u_uk[i];
  const PotentialMap& u = report.total;

  // Vertical line above the waveguide center.
  int ix = 0;
  for (int i = 1; i < u.nx; ++i)
    if (std::abs(u.x_nm[i]) < std::abs(u.x_nm[ix])) ix = i;
  int j_surf = 0;
  for (int j = 1; j < u.ny; ++j)
    if (std::abs(u.y_nm[j] - u.surface_y_nm) < std::abs(u.y_nm[j_surf] - u.surface_y_nm))
      j_surf = j;

  int j_min = -1;
  double best = 0.0;
  for (int j = j_surf + 1; j < u.ny - 1; ++j) {
    const double v = u.at(ix, j);
    if (j_min < 0 || v < best) {
      best = v;
      j_min = j;
    }
  }
  if (j_min < 0 || j_min >= u.ny - 1 || best >= 0.0)
    throw std::runtime_error("no trap");

  const double step = u.y_nm[1] - u.y_nm[0];
  double dy = 0.0, u_min = best;
  if (j_min > j_surf + 1 && j_min < u.ny - 1)
    quadratic_refine(u.at(ix, j_min - 1), u.at(ix, j_min), u.at(ix, j_min + 1), step, dy, u_min);

  // Barrier toward the surface: highest point between the surface and the minimum.
  double barrier_abs = u.at(ix, j_surf);
  for (int j = j_surf; j <= j_min; ++j) barrier_abs = std::max(barrier_abs, u.at(ix, j));
  const double barrier = barrier_abs - u_min;
  const double depth = std::min(-u_min, barrier);
  if (depth <= 0.0) throw std::runtime_error("no trap");

  report.min_x_nm = u.x_nm[ix];
  report.min_height_nm = u.y_nm[j_min] + dy - u.surface_y_nm;
  report.u_min_uk = u_min;
  report.barrier_uk = barrier;
  report.depth_uk = depth;
  return report;
}

double depth_vs_power(const geometry::WaveguideCrossSection& xs, double p_total_mw,
                      double blue_fraction, double lambda_blue_nm, double lambda_red_nm,
                      double h_nm) {
  if (blue_fraction <= 0.0 || blue_fraction >= 1.0)
    throw std::invalid_argument("blue_fraction must be in (0, 1)");
  const auto mode_blue = modesolver::solve_mode(xs, lambda_blue_nm, h_nm);
  const auto mode_red = modesolver::solve_mode(xs, lambda_red_nm, h_nm);
  const auto alpha_blue = cs_ground_polarizability(lambda_blue_nm);
  const auto alpha_red = cs_ground_polarizability(lambda_red_nm);
  // Unit-power depth scaled afterwards keeps depth(cP) = c depth(P) exact.
  const auto u_blue = dipole_potential(mode_blue, blue_fraction, alpha_blue);
  const auto u_red = dipole_potential(mode_red, 1.0 - blue_fraction, alpha_red);
  const TrapReport report = combine_and_characterize(u_blue, u_red);
  return report.depth_uk * p_total_mw;
}

}  // namespace atip::atomtrap
