#pragma once

#include <vector>

namespace atip::thinfilm {

enum class Polarization { S, P, Circular };

struct Layer {
  double n = 1.0;
  double d_nm = 0.0;
};

/// Free-standing lossless stack, vacuum on both sides.
struct FilmStack {
  std::vector<Layer> layers;
};

void validate(const FilmStack& stack);

/// Power transmittance of the stack at wavelength lambda_nm and incidence
/// angle theta_deg (from the normal). Circular polarization is the mean of
/// the s and p power transmittances.
double film_transmittance(const FilmStack& stack, double lambda_nm, double theta_deg,
                          Polarization pol);

/// Power reflectance; T + R = 1 for lossless stacks.
double film_reflectance(const FilmStack& stack, double lambda_nm, double theta_deg,
                        Polarization pol);

/// Smallest positive thickness maximizing transmittance of a single film:
/// d = lambda / (2 sqrt(n^2 - sin^2 theta)).
double find_ar_thickness(double n, double lambda_nm, double theta_deg);

struct TransmissionRow {
  double d_nm;
  double t_s;
  double t_p;
  double t_circ;
};

/// One row per thickness for a single film of index n.
std::vector<TransmissionRow> membrane_transmission_report(double n,
                                                          const std::vector<double>& thicknesses_nm,
                                                          double lambda_nm, double theta_deg);

}  // namespace atip::thinfilm
