#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "atip/atomtrap.hpp"
#include "atip/constants.hpp"

using namespace atip::atomtrap;
using atip::geometry::WaveguideCrossSection;
namespace constants = atip::constants;

namespace {

// Independent oracle for the two-line polarizability: same closed form,
// evaluated in a deliberately different arrangement (wavelength domain).
double alpha_oracle(double lambda_nm) {
  const double c = 299792458.0;
  const double eps0 = 8.8541878128e-12;
  const double pi = std::acos(-1.0);
  struct Line {
    double lambda_m;
    double gamma;
    double weight;
  } lines[] = {{894.59295986e-9, 2 * pi * 4.5612e6, 1.0 / 3.0},
               {852.34727582e-9, 2 * pi * 5.2227e6, 2.0 / 3.0}};
  const double lam = lambda_nm * 1e-9;
  double sum = 0.0;
  for (const auto& ln : lines) {
    const double w0 = 2 * pi * c / ln.lambda_m;
    const double w = 2 * pi * c / lam;
    const double lorentz = 2.0 * w0 / (w0 * w0 - w * w);
    sum += ln.weight * 3 * pi * eps0 * c * c * c * ln.gamma / (w0 * w0 * w0) * lorentz;
  }
  return sum;
}

const WaveguideCrossSection kRefXs{1.6, 100, 50, 1.76, 1.0};

TrapReport reference_trap(double p_blue_mw, double p_red_mw, double h_nm = 20) {
  const auto mode_blue = atip::modesolver::solve_mode(kRefXs, 793, h_nm);
  const auto mode_red = atip::modesolver::solve_mode(kRefXs, 937, h_nm);
  const auto u_blue =
      dipole_potential(mode_blue, p_blue_mw, cs_ground_polarizability(793));
  const auto u_red = dipole_potential(mode_red, p_red_mw, cs_ground_polarizability(937));
  return combine_and_characterize(u_blue, u_red);
}

}  // namespace

TEST_CASE("polarizability signs around the D lines") {
  CHECK(cs_ground_polarizability(937).alpha_si > 0);
  CHECK(cs_ground_polarizability(793).alpha_si < 0);
}

TEST_CASE("polarizability matches the independent two-line oracle") {
  for (double lam : {793.0, 937.0, 1064.0, 820.0})
    CHECK(cs_ground_polarizability(lam).alpha_si ==
          doctest::Approx(alpha_oracle(lam)).epsilon(1e-9));
}

TEST_CASE("near-resonance wavelengths are rejected") {
  CHECK_THROWS_AS(cs_ground_polarizability(894.6), std::invalid_argument);
  CHECK_THROWS_AS(cs_ground_polarizability(852.0), std::invalid_argument);
}

TEST_CASE("zero power gives zero potential; doubling power doubles it") {
  const auto mode = atip::modesolver::solve_mode(kRefXs, 937, 20);
  const auto alpha = cs_ground_polarizability(937);
  const auto u0 = dipole_potential(mode, 0.0, alpha);
  for (double u : u0.u_uk) CHECK(u == 0.0);
  const auto u1 = dipole_potential(mode, 1.5, alpha);
  const auto u2 = dipole_potential(mode, 3.0, alpha);
  for (std::size_t i = 0; i < u1.u_uk.size(); ++i) CHECK(u2.u_uk[i] == 2.0 * u1.u_uk[i]);
}

TEST_CASE("red-only potential is attractive everywhere and traps nothing") {
  const auto mode = atip::modesolver::solve_mode(kRefXs, 937, 20);
  const auto u_red = dipole_potential(mode, 2.0, cs_ground_polarizability(937));
  for (double u : u_red.u_uk) CHECK(u <= 0.0);
  auto zero = u_red;
  for (double& u : zero.u_uk) u = 0.0;
  CHECK_THROWS_WITH_AS(combine_and_characterize(zero, u_red), "no trap", std::runtime_error);
}

TEST_CASE("all-zero potentials give no trap") {
  const auto mode = atip::modesolver::solve_mode(kRefXs, 937, 20);
  auto zero = dipole_potential(mode, 0.0, cs_ground_polarizability(937));
  CHECK_THROWS_WITH_AS(combine_and_characterize(zero, zero), "no trap", std::runtime_error);
}

TEST_CASE("two-color trap exists above the surface") {
  const auto report = reference_trap(3.27, 2.73);
  CHECK(report.depth_uk > 0);
  CHECK(report.min_height_nm > 0);
  CHECK(report.min_height_nm < 300);
  CHECK(report.depth_uk ==
        doctest::Approx(std::min(-report.u_min_uk, report.barrier_uk)).epsilon(1e-12));
}

TEST_CASE("potential is exactly linear in a common power scale") {
  const auto a = reference_trap(3.27, 2.73);
  const auto b = reference_trap(3.27 * 2.5, 2.73 * 2.5);
  for (std::size_t i = 0; i < a.total.u_uk.size(); ++i)
    CHECK(b.total.u_uk[i] == doctest::Approx(2.5 * a.total.u_uk[i]).epsilon(1e-12));
}

TEST_CASE("more blue power pushes the trap minimum outward") {
  const auto near = reference_trap(3.27, 2.73);
  const auto far = reference_trap(5.5, 2.73);
  CHECK(far.min_height_nm > near.min_height_nm);
}

TEST_CASE("depth scales exactly linearly with total power") {
  const double ratio = 3.27 / 6.0;
  const double d6 = depth_vs_power(kRefXs, 6.0, ratio, 793, 937, 20);
  const double d30 = depth_vs_power(kRefXs, 30.0, ratio, 793, 937, 20);
  const double d206 = depth_vs_power(kRefXs, 20.6, ratio, 793, 937, 20);
  CHECK(d30 / d6 == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(d206 / d6 == doctest::Approx(20.6 / 6.0).epsilon(1e-9));
}

TEST_CASE("grid mismatch is rejected") {
  const auto mode20 = atip::modesolver::solve_mode(kRefXs, 937, 20);
  const auto mode10 = atip::modesolver::solve_mode(kRefXs, 937, 10);
  const auto a = dipole_potential(mode20, 1.0, cs_ground_polarizability(937));
  const auto b = dipole_potential(mode10, 1.0, cs_ground_polarizability(937));
  CHECK_THROWS_AS(combine_and_characterize(a, b), std::invalid_argument);
}
