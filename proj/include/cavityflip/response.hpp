#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cavityflip/params.hpp"

namespace cavityflip {

using Complex = std::complex<double>;

// Coherent drive, described in the frame rotating at its own frequency.
// |amplitude|^2 is the photon flux of the input beam.
struct DriveCondition {
  Complex amplitude;
  double omega;  // detuning of the drive from atomic resonance

  DriveCondition(Complex amplitude_, double omega_);
  double flux() const { return std::norm(amplitude); }
};

// Atomic expectation values <sigma_-> (complex) and <sigma_z> (real).
struct BlochState {
  Complex sigma_minus{0.0, 0.0};
  double sigma_z = -0.5;

  // 4(|sigma_-|^2 + sigma_z^2) - 1; <= 0 inside the Bloch ball.
  double ball_excess() const;
};

inline BlochState ground_state() { return BlochState{}; }

struct ReflectionResponse {
  Complex b_out;        // same normalization as the input amplitude
  double phase_deg;     // arg(b_out/b_in) in degrees, range (-180, 180]
  double reflectivity;  // |b_out/b_in|^2
};

double degrees(double radians);

// Steady state of the driven atom:
//   sigma_z = -(G^2+w^2) / (2 (G^2+w^2+4 b G f)),
//   sigma_- = -sqrt(2 b G)(G-iw) b_in / (G^2+w^2+4 b G f),  f = |b_in|^2.
BlochState steady_state(const AtomCavityParams& p, const DriveCondition& d);

// Input-output relation b_out = b_in + sqrt(2 beta Gamma) <sigma_->.
Complex input_output(const AtomCavityParams& p, Complex b_in, Complex sigma_minus);

// Steady-state reflected field via the closed-form response function
//   b_out/b_in = [((1-2b)G+iw)(G-iw) + 4 b G f] / [G^2+w^2+4 b G f].
ReflectionResponse output_amplitude(const AtomCavityParams& p, const DriveCondition& d);

// Weak-field limit of b_out/b_in: (Gamma(1-2 beta) + i omega)/(Gamma + i omega).
// Returns 0 at the degenerate point (beta = 0.5, omega = 0); taking the phase
// there is the caller's risk.
Complex weak_field_ratio(const AtomCavityParams& p, double omega);

// Nonlinear phase shift |dphi| between the weak-field and saturated responses,
// in degrees. Depends only on beta and omega/Gamma.
double nonlinear_phase_shift(double beta, double omega_over_Gamma);

// Weak-field reflectivity eta = ((1-2b)^2 + x^2)/(1 + x^2), x = omega/Gamma.
double linear_reflectivity(double beta, double omega_over_Gamma);

// One response per flux grid point (>= 0, strictly increasing). Points whose
// phase is undefined (zero input, vanishing output) come back empty instead
// of aborting the sweep.
std::vector<std::optional<ReflectionResponse>> response_vs_intensity(
    const AtomCavityParams& p, double omega, const std::vector<double>& flux_grid);

}  // namespace cavityflip
