#pragma once

#include <vector>

#include "atip/geometry.hpp"

namespace atip::thermal {

/// Fixed transverse width over which each path cell's absorbed power is
/// smeared. Physical regularization of the line source: without it the
/// peak temperature grows logarithmically as the cell size shrinks.
inline constexpr double kSourceFootprintUm = 10.0;

struct SolverOptions {
  double tol_k = 0.01;     // max temperature update at convergence
  int max_iter = 10000;    // Newton iteration cap
  double relax = 1.0;      // under-relaxation factor in (0, 1]
  bool radiation = true;   // gray-body radiation term on/off
};

struct ThermalField {
  // Same grid as the mask; Hole cells hold t_amb.
  int nx = 0;
  int ny = 0;
  double cell_um = 0.0;
  std::vector<double> t_k;
  double residual_k = 0.0;
  int iterations = 0;
  // Energy balance at convergence (W).
  double absorbed_w = 0.0;
  double conducted_w = 0.0;
  double radiated_w = 0.0;

  double at(int i, int j) const { return t_k[static_cast<std::size_t>(i) * ny + j]; }
};

/// Steady-state sheet temperature: in-plane conduction k*t, two-sided
/// gray-body radiation against t_amb surroundings, and the distributed
/// absorption source P(s) = P exp(-alpha_lin s) deposited along the
/// waveguide path. Finite-volume, Newton with optional under-relaxation.
/// Throws std::runtime_error("diverged") or ("not converged").
ThermalField steady_state_temperature(const geometry::ThermalMask& mask,
                                      const geometry::MaterialProperties& mat,
                                      double p_wg_mw, const SolverOptions& opt = {});

double peak_temperature(const ThermalField& field);

/// Waveguide power at which the peak temperature reaches mat.t_fail_k,
/// bisected to 0.1 mW. Throws std::runtime_error("bracket failure") when
/// 1 W still stays below the failure temperature.
double failure_power_mw(const geometry::ThermalMask& mask,
                        const geometry::MaterialProperties& mat,
                        const SolverOptions& opt = {});

struct FailurePoint {
  double span_um;
  double p_fail_mw;
};

/// Builds one mask per span for the design family and evaluates the failure
/// power of each. Spans must be sorted ascending. For the hybrid-needle
/// family the needle gap tracks the span as gap = span + gap_minus_span_um.
std::vector<FailurePoint> failure_power_curve(const std::string& family,
                                              const std::vector<double>& spans_um,
                                              const geometry::WaveguideCrossSection& xs,
                                              const geometry::MaterialProperties& mat,
                                              double cell_um,
                                              const geometry::MaskOptions& mask_opt = {},
                                              const SolverOptions& opt = {},
                                              double gap_minus_span_um = 210.0);

/// Joint fit of (emissivity, w_strip_um) to two peak-temperature anchors at
/// a common drive power: coarse grid refined around the best point.
struct CalibrationResult {
  double emissivity = 0.0;
  double w_strip_um = 0.0;
  double peak_infinity_k = 0.0;
  double peak_needle_k = 0.0;
};

struct CalibrationTargets {
  double p_wg_mw = 10.0;
  // The failure-tested array devices double as the calibration geometries.
  geometry::DeviceDesign infinity_design{geometry::InfinityDesign{125.0}};
  geometry::DeviceDesign needle_design{geometry::HybridNeedleDesign{250.0, 460.0}};
  double peak_infinity_k = 1200.0;
  double peak_needle_k = 1400.0;
};

CalibrationResult calibrate_emissivity_wstrip(const CalibrationTargets& targets,
                                              const geometry::WaveguideCrossSection& xs,
                                              geometry::MaterialProperties mat,
                                              double cell_um,
                                              geometry::MaskOptions mask_opt = {},
                                              const SolverOptions& opt = {});

}  // namespace atip::thermal
