#include "atip/powerlab.hpp"

#include <cmath>
#include <stdexcept>

namespace atip::powerlab {

void validate(const PowerMeasurement& m) {
  if (m.p_in_mw <= 0) throw std::invalid_argument("p_in_mw must be positive");
  if (m.p_out_mw < 0 || m.p_out_mw > m.p_in_mw)
    throw std::invalid_argument("p_out_mw must be in [0, p_in_mw]");
}

void validate(const ScatterTrace& trace) {
  if (trace.samples.size() < 3) throw std::invalid_argument("trace needs at least 3 samples");
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    if (trace.samples[i].intensity <= 0)
      throw std::invalid_argument("intensities must be positive");
    if (i > 0 && trace.samples[i].position_cm <= trace.samples[i - 1].position_cm)
      throw std::invalid_argument("positions must be strictly increasing");
  }
}

double waveguide_power_mw(const PowerMeasurement& m) {
  validate(m);
  return std::sqrt(m.p_in_mw * m.p_out_mw);
}

LossFit fit_propagation_loss(const ScatterTrace& trace) {
  validate(trace);
  const std::size_t n = trace.samples.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : trace.samples) {
    const double x = s.position_cm;
    const double y = std::log10(s.intensity);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0) throw std::invalid_argument("degenerate fit: positions have no spread");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  double ss_res = 0;
  for (const auto& s : trace.samples) {
    const double r = std::log10(s.intensity) - (intercept + slope * s.position_cm);
    ss_res += r * r;
  }
  // Slope standard error; zero residual (noiseless) gives zero error.
  const double slope_var = n > 2 ? (ss_res / (n - 2)) * n / denom : 0.0;
  return {-10.0 * slope, 10.0 * std::sqrt(std::max(slope_var, 0.0))};
}

double facet_coupling(const PowerMeasurement& m, double alpha_db_per_cm, double length_cm) {
  validate(m);
  if (length_cm <= 0) throw std::invalid_argument("length_cm must be positive");
  const double transmission = m.p_out_mw / m.p_in_mw;
  const double eta = std::sqrt(transmission * std::pow(10.0, alpha_db_per_cm * length_cm / 10.0));
  if (eta > 1.0 + 1e-12)
    throw std::invalid_argument("inconsistent inputs: implied coupling efficiency exceeds 1");
  return std::min(eta, 1.0);
}

}  // namespace atip::powerlab
