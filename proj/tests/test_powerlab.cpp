#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "atip/powerlab.hpp"

using namespace atip::powerlab;

namespace {

ScatterTrace synthetic_trace(double alpha_db, int samples = 30, double span_cm = 3.0,
                             double noise = 0.0, unsigned seed = 0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  ScatterTrace trace;
  for (int i = 0; i < samples; ++i) {
    const double x = span_cm * i / (samples - 1);
    double intensity = std::pow(10.0, -alpha_db * x / 10.0);
    if (noise > 0) intensity *= 1.0 + gauss(rng);
    trace.samples.push_back({x, intensity});
  }
  return trace;
}

}  // namespace

TEST_CASE("waveguide power is the geometric mean") {
  CHECK(waveguide_power_mw({10.0, 0.4}) == doctest::Approx(2.0));
  CHECK(waveguide_power_mw({7.3, 7.3}) == doctest::Approx(7.3));
  // 20% transmission -> P_wg = sqrt(0.2) * P_in.
  CHECK(waveguide_power_mw({10.0, 2.0}) == doctest::Approx(std::sqrt(0.2) * 10.0));
  const PowerMeasurement m{12.5, 3.75};
  const double p = waveguide_power_mw(m);
  CHECK(p * p == doctest::Approx(m.p_in_mw * m.p_out_mw).epsilon(1e-15));
}

TEST_CASE("power measurement invariants") {
  CHECK_THROWS_AS(waveguide_power_mw({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(waveguide_power_mw({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("noiseless loss fit recovers exactly") {
  const auto fit = fit_propagation_loss(synthetic_trace(1.0));
  CHECK(fit.alpha_db_per_cm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.std_error_db_per_cm == doctest::Approx(0.0).scale(1).epsilon(1e-9));
}

TEST_CASE("constant intensity fits zero loss") {
  ScatterTrace trace;
  for (int i = 0; i < 10; ++i) trace.samples.push_back({0.1 * i, 2.5});
  CHECK(fit_propagation_loss(trace).alpha_db_per_cm == doctest::Approx(0.0).scale(1));
}

TEST_CASE("fit is scale invariant") {
  auto trace = synthetic_trace(1.3, 25, 2.0, 0.01, 42);
  const double a0 = fit_propagation_loss(trace).alpha_db_per_cm;
  for (auto& s : trace.samples) s.intensity *= 737.5;
  const double a1 = fit_propagation_loss(trace).alpha_db_per_cm;
  CHECK(a0 == doctest::Approx(a1).epsilon(1e-12));
}

TEST_CASE("noisy recovery within 3 standard errors for >= 95% of seeds") {
  int hits = 0;
  const int trials = 1000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto fit = fit_propagation_loss(synthetic_trace(1.0, 30, 3.0, 0.02, seed));
    if (std::abs(fit.alpha_db_per_cm - 1.0) <= 3.0 * fit.std_error_db_per_cm) ++hits;
  }
  CHECK(hits >= 950);
}

TEST_CASE("trace invariants") {
  ScatterTrace short_trace;
  short_trace.samples = {{0.0, 1.0}, {1.0, 0.5}};
  CHECK_THROWS_AS(fit_propagation_loss(short_trace), std::invalid_argument);
  ScatterTrace bad_order;
  bad_order.samples = {{0.0, 1.0}, {1.0, 0.5}, {0.5, 0.7}};
  CHECK_THROWS_AS(fit_propagation_loss(bad_order), std::invalid_argument);
  ScatterTrace negative;
  negative.samples = {{0.0, 1.0}, {1.0, -0.5}, {2.0, 0.2}};
  CHECK_THROWS_AS(fit_propagation_loss(negative), std::invalid_argument);
}

TEST_CASE("facet coupling closed form and identities") {
  CHECK(facet_coupling({10.0, 2.0}, 1.0, 1.0) ==
        doctest::Approx(std::sqrt(0.2 * std::pow(10.0, 0.1))).epsilon(1e-12));
  CHECK(facet_coupling({10.0, 2.0}, 1.0, 1.0) == doctest::Approx(0.5017).epsilon(1e-4));
  CHECK(facet_coupling({4.0, 1.0}, 0.0, 2.0) == doctest::Approx(0.5));
  CHECK(facet_coupling({5.0, 5.0}, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(facet_coupling({5.0, 5.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("facet coupling round-trips the output power") {
  const PowerMeasurement m{8.0, 1.45};
  const double alpha = 0.9, length = 1.7;
  const double eta = facet_coupling(m, alpha, length);
  const double p_out = m.p_in_mw * eta * eta * std::pow(10.0, -alpha * length / 10.0);
  CHECK(p_out == doctest::Approx(m.p_out_mw).epsilon(1e-9));
}
