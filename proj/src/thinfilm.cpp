#include "atip/thinfilm.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "atip/constants.hpp"

namespace atip::thinfilm {

namespace {

using cplx = std::complex<double>;

struct Amplitudes {
  double t_power;
  double r_power;
};

// Characteristic-matrix method for a lossless stack in vacuum.
Amplitudes stack_amplitudes(const FilmStack& stack, double lambda_nm, double theta_deg,
                            bool p_pol) {
  const double theta = theta_deg * constants::pi / 180.0;
  const double sin0 = std::sin(theta);
  const double cos0 = std::cos(theta);
  const double eta_out = p_pol ? 1.0 / cos0 : cos0;  // vacuum both sides

  cplx m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  for (const Layer& layer : stack.layers) {
    const double cosl = std::sqrt(1.0 - (sin0 * sin0) / (layer.n * layer.n));
    const double delta = 2.0 * constants::pi * layer.n * layer.d_nm * cosl / lambda_nm;
    const double eta = p_pol ? layer.n / cosl : layer.n * cosl;
    const cplx a = std::cos(delta);
    const cplx b = cplx(0.0, std::sin(delta) / eta);
    const cplx c = cplx(0.0, eta * std::sin(delta));
    const cplx n00 = m00 * a + m01 * c;
    const cplx n01 = m00 * b + m01 * a;
    const cplx n10 = m10 * a + m11 * c;
    const cplx n11 = m10 * b + m11 * a;
    m00 = n00; m01 = n01; m10 = n10; m11 = n11;
  }
  const cplx num_b = m00 + m01 * eta_out;
  const cplx num_c = m10 + m11 * eta_out;
  const cplx t = 2.0 * eta_out / (eta_out * num_b + num_c);
  const cplx r = (eta_out * num_b - num_c) / (eta_out * num_b + num_c);
  return {std::norm(t), std::norm(r)};
}

double combine(const FilmStack& stack, double lambda_nm, double theta_deg, Polarization pol,
               bool reflect) {
  validate(stack);
  if (lambda_nm <= 0) throw std::invalid_argument("wavelength must be positive");
  if (theta_deg < 0 || theta_deg >= 90)
    throw std::invalid_argument("incidence angle must be in [0, 90)");
  const Amplitudes s = stack_amplitudes(stack, lambda_nm, theta_deg, false);
  const Amplitudes p = stack_amplitudes(stack, lambda_nm, theta_deg, true);
  switch (pol) {
    case Polarization::S: return reflect ? s.r_power : s.t_power;
    case Polarization::P: return reflect ? p.r_power : p.t_power;
    case Polarization::Circular:
    default:
      return reflect ? 0.5 * (s.r_power + p.r_power) : 0.5 * (s.t_power + p.t_power);
  }
}

}  // namespace

void validate(const FilmStack& stack) {
  for (const Layer& layer : stack.layers) {
    if (layer.n < 1.0) throw std::invalid_argument("layer index must be >= 1");
    if (layer.d_nm < 0.0) throw std::invalid_argument("layer thickness must be >= 0");
  }
}

double film_transmittance(const FilmStack& stack, double lambda_nm, double theta_deg,
                          Polarization pol) {
  return combine(stack, lambda_nm, theta_deg, pol, false);
}

double film_reflectance(const FilmStack& stack, double lambda_nm, double theta_deg,
                        Polarization pol) {
  return combine(stack, lambda_nm, theta_deg, pol, true);
}

double find_ar_thickness(double n, double lambda_nm, double theta_deg) {
  if (n <= 1.0) throw std::invalid_argument("film index must exceed 1");
  const double s = std::sin(theta_deg * constants::pi / 180.0);
  return lambda_nm / (2.0 * std::sqrt(n * n - s * s));
}

std::vector<TransmissionRow> membrane_transmission_report(double n,
                                                          const std::vector<double>& thicknesses_nm,
                                                          double lambda_nm, double theta_deg) {
  std::vector<TransmissionRow> rows;
  rows.reserve(thicknesses_nm.size());
  for (double d : thicknesses_nm) {
    FilmStack stack{{{n, d}}};
    rows.push_back({d, film_transmittance(stack, lambda_nm, theta_deg, Polarization::S),
                    film_transmittance(stack, lambda_nm, theta_deg, Polarization::P),
                    film_transmittance(stack, lambda_nm, theta_deg, Polarization::Circular)});
  }
  return rows;
}

}  // namespace atip::thinfilm
