#pragma once

#include <vector>

namespace atip::powerlab {

struct PowerMeasurement {
  double p_in_mw = 0.0;
  double p_out_mw = 0.0;
};

struct ScatterSample {
  double position_cm = 0.0;
  double intensity = 0.0;  // arbitrary units, > 0
};

struct ScatterTrace {
  std::vector<ScatterSample> samples;
};

void validate(const PowerMeasurement& m);
void validate(const ScatterTrace& trace);

/// Waveguide-coupled power estimate sqrt(P_in * P_out), assuming equal
/// facet coupling on both sides.
double waveguide_power_mw(const PowerMeasurement& m);

struct LossFit {
  double alpha_db_per_cm = 0.0;
  double std_error_db_per_cm = 0.0;
};

/// Ordinary least squares of log10(intensity) against position;
/// alpha = -10 * slope, standard error from the fit residuals.
LossFit fit_propagation_loss(const ScatterTrace& trace);

/// Per-facet coupling efficiency sqrt((P_out/P_in) * 10^(alpha L / 10)).
/// Throws when the inputs imply efficiency > 1.
double facet_coupling(const PowerMeasurement& m, double alpha_db_per_cm, double length_cm);

}  // namespace atip::powerlab
