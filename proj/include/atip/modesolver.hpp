#pragma once

#include <vector>

#include "atip/geometry.hpp"

namespace atip::modesolver {

/// Fundamental quasi-TE mode on a uniform cross-section grid. The field is
/// the dominant transverse component, normalized so the carried power
/// (plane-wave Poynting approximation) is 1 mW. Coordinates: x transverse
/// across the ridge (centered), y normal to the membrane with y = 0 at the
/// membrane bottom; the ridge top surface sits at y = t_wg_nm.
struct ModeSolution {
  double lambda_nm = 0.0;
  double n_eff = 0.0;
  double h_nm = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> x_nm;  // cell centers
  std::vector<double> y_nm;
  std::vector<double> field;  // V/m, row-major (ix*ny + iy)
  double surface_y_nm = 0.0;  // ridge top surface (= t_wg_nm)
  int iterations = 0;

  double at(int ix, int iy) const { return field[static_cast<std::size_t>(ix) * ny + iy]; }
};

/// TE0 effective index of a symmetric slab (core n_core, cladding n_clad,
/// thickness t_nm) from the transcendental dispersion relation, bisected to
/// 1e-9. The TE0 mode of a symmetric slab always exists.
double solve_slab_te(double n_core, double n_clad, double t_nm, double lambda_nm);

struct SolveOptions {
  double margin_um = 2.0;  // window margin beyond the ridge on all sides
  int max_iterations = 500;
  double tol = 1e-10;  // relative eigenvalue change
};

/// Solves the scalar Helmholtz eigenproblem on a uniform grid by shifted
/// inverse power iteration; the shift comes from the equivalent-slab index.
/// Throws std::runtime_error("no guided mode") or ("not converged").
ModeSolution solve_mode(const geometry::WaveguideCrossSection& xs, double lambda_nm,
                        double h_nm, const SolveOptions& opt = {});

/// 1/e decay length of the evanescent tail: 1/gamma with
/// gamma = (2 pi / lambda) sqrt(n_eff^2 - 1). Throws on n_eff <= 1.
double evanescent_decay_length_nm(double n_eff, double lambda_nm);

/// Recomputes the carried power (W) from the stored field; 1e-3 after
/// normalization.
double carried_power_w(const ModeSolution& mode);

}  // namespace atip::modesolver
