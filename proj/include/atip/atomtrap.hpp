#pragma once

#include <vector>

#include "atip/modesolver.hpp"

namespace atip::atomtrap {

/// Scalar ground-state polarizability of Cs at one wavelength, SI (C m^2 / V).
/// Positive red of both D lines (e.g. 937 nm), negative blue (e.g. 793 nm).
struct Polarizability {
  double lambda_nm = 0.0;
  double alpha_si = 0.0;
};

/// Cs D-line data, Steck "Cesium D Line Data" (rev. 2.3.3):
/// D1 894.59295986 nm, Gamma/2pi = 4.5612 MHz; D2 852.34727582 nm,
/// Gamma/2pi = 5.2227 MHz. Line weights 1/3 (D1) and 2/3 (D2).
struct CsLineData {
  double lambda_d1_nm = 894.59295986;
  double gamma_d1 = 2.0 * 3.14159265358979323846 * 4.5612e6;  // rad/s
  double lambda_d2_nm = 852.34727582;
  double gamma_d2 = 2.0 * 3.14159265358979323846 * 5.2227e6;
};

/// Far-detuned two-line sum with rotating and counter-rotating terms.
/// Rejects wavelengths within 1 nm of either D line.
Polarizability cs_ground_polarizability(double lambda_nm, const CsLineData& lines = {});

/// Potential map in uK (U / k_B) on the mode grid.
struct PotentialMap {
  int nx = 0;
  int ny = 0;
  std::vector<double> x_nm;
  std::vector<double> y_nm;
  std::vector<double> u_uk;  // row-major (ix*ny + iy)
  double surface_y_nm = 0.0;  // ridge top surface

  double at(int ix, int iy) const { return u_uk[static_cast<std::size_t>(ix) * ny + iy]; }
};

/// U = -(1/2 eps0 c) alpha I, with I the intensity of the 1 mW-normalized
/// mode scaled to power_mw. Throws if alpha's wavelength disagrees with the
/// mode's.
PotentialMap dipole_potential(const modesolver::ModeSolution& mode, double power_mw,
                              const Polarizability& alpha);

struct TrapReport {
  PotentialMap total;
  double min_x_nm = 0.0;       // relative to the waveguide top surface center
  double min_height_nm = 0.0;  // above the surface
  double u_min_uk = 0.0;
  double barrier_uk = 0.0;  // barrier toward the surface, relative to U_min
  double depth_uk = 0.0;    // min(-U_min, barrier)
  double power_blue_mw = 0.0;
  double power_red_mw = 0.0;
};

/// Sums the two color maps and characterizes the trap along the vertical
/// line above the waveguide center (grid search + quadratic refinement).
/// Throws std::runtime_error("no trap") when no minimum with positive depth
/// exists above the surface.
TrapReport combine_and_characterize(const PotentialMap& u_blue, const PotentialMap& u_red);

/// Trap depth for the cross-section at total power p_total_mw split as
/// blue_fraction to the blue color. Depth is exactly linear in p_total_mw.
double depth_vs_power(const geometry::WaveguideCrossSection& xs, double p_total_mw,
                      double blue_fraction, double lambda_blue_nm = 793.0,
                      double lambda_red_nm = 937.0, double h_nm = 10.0);

}  // namespace atip::atomtrap
