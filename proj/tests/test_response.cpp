#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "cavityflip/response.hpp"

using namespace cavityflip;

namespace {

double rel(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

TEST_CASE("steady state: undriven atom sits in the ground state") {
  const AtomCavityParams p(1.3, 0.7);
  const BlochState s = steady_state(p, DriveCondition(0.0, 0.4));
  CHECK(s.sigma_minus == Complex(0.0, 0.0));
  CHECK(s.sigma_z == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("steady state: strong resonant drive saturates the inversion") {
  const AtomCavityParams p(1.0, 0.8);
  const BlochState s = steady_state(p, DriveCondition(1e3, 0.0));  // flux 1e6
  CHECK(s.sigma_z < 0.0);
  CHECK(s.sigma_z > -1e-5);
}

TEST_CASE("steady state: hand-checked point at beta = 0.5") {
  // denominator = Gamma^2 + 4 beta Gamma |b|^2 = 1 + 1 = 2
  const AtomCavityParams p(1.0, 0.5);
  const Complex b_in = std::sqrt(0.5);
  const BlochState s = steady_state(p, DriveCondition(b_in, 0.0));
  CHECK(s.sigma_z == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(rel(s.sigma_minus, -0.5 * b_in) < 1e-15);
}

TEST_CASE("output amplitude: strong-field limit reflects like an empty cavity") {
  const AtomCavityParams p(1.0, 0.8);
  const ReflectionResponse r = output_amplitude(p, DriveCondition(1e4, 0.0));  // 1e8 flux
  CHECK(std::abs(r.b_out / 1e4 - 1.0) < 1e-7);
  CHECK(std::abs(r.phase_deg) < 1e-6);
}

TEST_CASE("output amplitude: weak field at beta = 0.5 on resonance vanishes") {
  const AtomCavityParams p(1.0, 0.5);
  // not yet degenerate: ratio ~ 2e-6 of the input
  const ReflectionResponse r = output_amplitude(p, DriveCondition(1e-3, 0.0));
  CHECK(r.reflectivity < 1e-11);
  // vanishing output: phase is meaningless and must be refused
  CHECK_THROWS_AS(output_amplitude(p, DriveCondition(1e-15, 0.0)), DegenerateResponse);
}

TEST_CASE("output amplitude: beta = 1 weak field flips the sign") {
  const AtomCavityParams p(1.0, 1.0);
  const ReflectionResponse r = output_amplitude(p, DriveCondition(1e-6, 0.0));
  CHECK(rel(r.b_out, Complex(-1e-6, 0.0)) < 1e-10);
  CHECK(r.phase_deg == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("output amplitude: zero input has no phase") {
  const AtomCavityParams p(1.0, 0.8);
  CHECK_THROWS_AS(output_amplitude(p, DriveCondition(0.0, 0.0)), ZeroInput);
}

TEST_CASE("weak-field ratio frozen points") {
  CHECK(rel(weak_field_ratio(AtomCavityParams(1.0, 1.0), 0.0), Complex(-1.0, 0.0)) < 1e-15);
  CHECK(rel(weak_field_ratio(AtomCavityParams(2.0, 0.0), 0.7), Complex(1.0, 0.0)) < 1e-15);
  CHECK(rel(weak_field_ratio(AtomCavityParams(1.0, 0.8), 1.0), Complex(0.2, 0.8)) < 1e-14);
}

TEST_CASE("nonlinear phase shift reproduces the spectrum landmarks") {
  CHECK(nonlinear_phase_shift(0.2, 0.78) == doctest::Approx(14.477177096040002).epsilon(1e-12));
  CHECK(nonlinear_phase_shift(0.2, 0.78) > 14.0);
  CHECK(nonlinear_phase_shift(0.2, 0.78) < 15.0);
  CHECK(nonlinear_phase_shift(0.4, 0.45) == doctest::Approx(41.80976570746764).epsilon(1e-12));
  CHECK(nonlinear_phase_shift(0.6, 0.0) == doctest::Approx(180.0).epsilon(1e-11));
  CHECK(nonlinear_phase_shift(0.8, 0.0) == doctest::Approx(180.0).epsilon(1e-11));
  CHECK(std::abs(nonlinear_phase_shift(0.3, 1e9)) < 1e-6);
  CHECK(nonlinear_phase_shift(0.3, 0.0) == 0.0);
  CHECK_THROWS_AS(nonlinear_phase_shift(0.5, 0.0), DegenerateResponse);
  CHECK_THROWS_AS(nonlinear_phase_shift(1.5, 0.0), InvalidParameter);
}

TEST_CASE("linear reflectivity resonant values") {
  CHECK(std::abs(linear_reflectivity(0.6, 0.0) - 0.04) < 1e-12);
  CHECK(std::abs(linear_reflectivity(0.8, 0.0) - 0.36) < 1e-12);
  CHECK(linear_reflectivity(0.5, 0.0) == 0.0);
  CHECK(linear_reflectivity(0.3, 1e8) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("response vs intensity: saturation endpoints and a frozen midpoint") {
  const AtomCavityParams p(1.0, 0.8);
  const double sat = 1.25;  // Gamma/beta
  const auto rs = response_vs_intensity(p, 0.0, {1e-9 * sat, 1.0, 1e9 * sat});
  REQUIRE(rs.size() == 3);
  REQUIRE(rs[0].has_value());
  REQUIRE(rs[2].has_value());
  CHECK(rs[0]->reflectivity == doctest::Approx(0.36).epsilon(1e-6));
  CHECK(rs[2]->reflectivity == doctest::Approx(1.0).epsilon(1e-6));

  // beta = 0.5, Gamma = 1, omega = 0, flux = 1:
  // ratio = (0 + 2)/(1 + 2) = 2/3, reflectivity 4/9
  const auto mid = response_vs_intensity(AtomCavityParams(1.0, 0.5), 0.0, {1.0});
  REQUIRE(mid[0].has_value());
  CHECK(rel(mid[0]->b_out, Complex(2.0 / 3.0, 0.0)) < 1e-15);
  CHECK(mid[0]->reflectivity == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(mid[0]->phase_deg == 0.0);

  // flux = 0 has no phase: flagged, not fatal
  const auto with_zero = response_vs_intensity(p, 0.0, {0.0, 1.0});
  CHECK(!with_zero[0].has_value());
  CHECK(with_zero[1].has_value());

  CHECK_THROWS_AS(response_vs_intensity(p, 0.0, {1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(response_vs_intensity(p, 0.0, {-1.0, 1.0}), InvalidParameter);
}

TEST_CASE("response vs intensity: signed resonant ratio grows monotonically") {
  // The reflectivity itself is monotone only for beta <= 1/2; above that the
  // amplitude crosses zero on its way from 1-2beta to 1 (the phase flip).
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(1e-3 * std::pow(10.0, i * 0.15));

  for (double beta : {0.2, 0.5, 0.8}) {
    const AtomCavityParams p(1.0, beta);
    const auto rs = response_vs_intensity(p, 0.0, grid);
    double prev_ratio = -2.0;
    double prev_refl = -1.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      REQUIRE(rs[i].has_value());
      const double ratio = rs[i]->b_out.real() / std::sqrt(grid[i]);
      CHECK(std::abs(rs[i]->b_out.imag()) < 1e-15);
      CHECK(ratio >= prev_ratio - 1e-12);
      if (beta <= 0.5) {
        CHECK(rs[i]->reflectivity >= prev_refl - 1e-12);
        prev_refl = rs[i]->reflectivity;
      }
      prev_ratio = ratio;
    }
  }
}

TEST_CASE("properties: scale invariance, evenness, passivity, path agreement") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  std::uniform_real_distribution<double> detuning(-10.0, 10.0);

  for (int trial = 0; trial < 500; ++trial) {
    const double beta = unit(rng);
    const double Gamma = std::pow(10.0, log_scale(rng));
    const double x = detuning(rng);
    const double flux = std::pow(10.0, log_scale(rng)) * Gamma;
    const AtomCavityParams p(Gamma, beta);
    const DriveCondition d(std::sqrt(flux), x * Gamma);

    // Eq-path agreement: closed-form response equals input-output applied
    // to the steady state.
    const BlochState s = steady_state(p, d);
    const ReflectionResponse r = output_amplitude(p, d);
    CHECK(rel(r.b_out, input_output(p, d.amplitude, s.sigma_minus)) < 1e-12);

    // passivity and the Bloch ball
    CHECK(r.reflectivity <= 1.0 + 1e-9);
    CHECK(s.ball_excess() <= 1e-9);
    CHECK(s.sigma_z >= -0.5);
    CHECK(s.sigma_z <= 0.0);

    // scale invariance of the dimensionless outputs
    const double c = std::pow(10.0, log_scale(rng));
    const AtomCavityParams ps(c * Gamma, beta);
    const DriveCondition ds(std::sqrt(c * flux), c * x * Gamma);
    const ReflectionResponse rs = output_amplitude(ps, ds);
    CHECK(rel(rs.b_out / ds.amplitude, r.b_out / d.amplitude) < 1e-12);
    CHECK(rs.reflectivity == doctest::Approx(r.reflectivity).epsilon(1e-12));

    // evenness in the detuning
    if (!(beta == 0.5 && x == 0.0)) {
      CHECK(nonlinear_phase_shift(beta, x) ==
            doctest::Approx(nonlinear_phase_shift(beta, -x)).epsilon(1e-12));
    }
    CHECK(linear_reflectivity(beta, x) ==
          doctest::Approx(linear_reflectivity(beta, -x)).epsilon(1e-12));

    // |arg(weak ratio)| equals the closed-form phase shift
    const Complex weak = weak_field_ratio(p, x * Gamma);
    if (std::abs(weak) > 1e-12) {
      CHECK(std::abs(std::abs(degrees(std::arg(weak))) - nonlinear_phase_shift(beta, x)) <
            1e-9);
    }

    // weak- and strong-limit consistency; the weak comparison needs the
    // ratio bounded away from its zero at (beta = 0.5, omega = 0)
    const double sat = Gamma / std::max(beta, 1e-3);
    const ReflectionResponse weak_r = output_amplitude(p, DriveCondition(std::sqrt(1e-9 * sat), d.omega));
    if (std::abs(weak) > 0.05) {
      CHECK(rel(weak_r.b_out / std::sqrt(1e-9 * sat), weak) < 1e-6);
    }
    const ReflectionResponse strong_r =
        output_amplitude(p, DriveCondition(std::sqrt(1e9 * sat), d.omega));
    CHECK(rel(strong_r.b_out / std::sqrt(1e9 * sat), Complex(1.0, 0.0)) < 1e-6);
  }
}

TEST_CASE("drive condition validates its fields") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DriveCondition(Complex(nan, 0.0), 0.0), InvalidParameter);
  CHECK_THROWS_AS(DriveCondition(1.0, nan), InvalidParameter);
  CHECK(DriveCondition(Complex(3.0, 4.0), 0.0).flux() == doctest::Approx(25.0));
}
