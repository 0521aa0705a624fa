#pragma once

#include <string>
#include <vector>

#include "atip/geometry.hpp"
#include "atip/thermal.hpp"

namespace atip::sweep {

enum class Objective { DepthPerMw, DepthAtPower, PFail };

struct SweepSpec {
  std::vector<double> w_wg_um = {1.6};
  std::vector<double> t_wg_nm = {100.0};
  std::vector<double> t_mem_nm = {50.0};
  double n_core = 1.76;
  double n_amb = 1.0;
  double lambda_blue_nm = 793.0;
  double lambda_red_nm = 937.0;
  double blue_fraction = 3.27 / 6.0;  // Fig-style two-color power split
  double total_power_mw = 6.0;        // used by DepthAtPower
  double h_nm = 20.0;                 // mode-solver grid for sweeps
  Objective objective = Objective::DepthPerMw;
  std::size_t max_points = 4096;
  // Context for the PFail objective.
  geometry::DeviceDesign design{geometry::InfinityDesign{125.0}};
  geometry::MaterialProperties material;
  geometry::MaskOptions mask_options;
  double cell_um = 5.0;
};

void validate(const SweepSpec& spec);

struct SweepRow {
  double w_wg_um;
  double t_wg_nm;
  double t_mem_nm;
  double objective;  // NaN when status != "ok"
  std::string status;
};

/// Evaluates every grid point in lexicographic (w_wg, t_wg, t_mem) order.
/// Failed points carry a status string instead of aborting the sweep.
/// Points may be evaluated concurrently (ATIP_WORKERS); output order is
/// canonical regardless.
std::vector<SweepRow> grid_sweep(const SweepSpec& spec);

struct Bounds {
  double lo;
  double hi;
};

struct OptimizeResult {
  geometry::WaveguideCrossSection best;
  double depth_per_mw_uk = 0.0;
  int evaluations = 0;
};

/// Coarse grid search over the seed spec followed by bounded Nelder-Mead
/// refinement of depth-per-mW. Stops when the simplex shrinks below 1 nm in
/// the thicknesses and 10 nm in the width, or the objective changes < 0.5%.
OptimizeResult optimize_depth_per_mw(const Bounds& w_wg_um, const Bounds& t_wg_nm,
                                     const Bounds& t_mem_nm, const SweepSpec& seed_grid);

}  // namespace atip::sweep
