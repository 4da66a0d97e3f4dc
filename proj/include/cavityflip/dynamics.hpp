#pragma once

#include <functional>
#include <vector>

#include "cavityflip/params.hpp"
#include "cavityflip/response.hpp"

namespace cavityflip {

// Drive in the rotating frame: a detuning plus a slowly varying complex
// envelope. A constant envelope is a CW drive.
struct DriveEnvelope {
  double omega = 0.0;
  std::function<Complex(double)> envelope;

  static DriveEnvelope cw(const DriveCondition& d);
};

struct IntegratorConfig {
  double dt = 0.0;
  double t_max = 0.0;
  double convergence_tol = 1e-10;
  int record_stride = 1;
};

// Largest rate in the problem: Gamma, the detuning, or the Rabi frequency
// 2 sqrt(2 beta Gamma flux).
double fastest_rate(const AtomCavityParams& p, double omega, double peak_flux);

// Stable defaults: dt = 0.05/fastest_rate (capped at 0.1/Gamma), t_max = 40/Gamma.
IntegratorConfig default_integrator(const AtomCavityParams& p, double omega,
                                    double peak_flux);

struct BlochRate {
  Complex d_sigma_minus{0.0, 0.0};
  double d_sigma_z = 0.0;
  double norm() const;
};

// Bloch equations in the rotating frame of the drive:
//   d<sigma_->/dt = -(Gamma + i omega) <sigma_-> + 2 sqrt(2 b G) b_in <sigma_z>
//   d<sigma_z>/dt = -2 Gamma (<sigma_z> + 1/2)
//                   - sqrt(2 b G) (conj(b_in) <sigma_-> + b_in conj(<sigma_->))
// The -i omega sign is the convention whose fixed point is steady_state().
BlochRate derivative(const BlochState& s, const AtomCavityParams& p, Complex b_in,
                     double omega);

struct BlochTrajectory {
  std::vector<double> times;
  std::vector<BlochState> states;
  std::vector<Complex> b_out;
};

// Fixed-step classic fourth-order integration. Every step is checked against
// two half steps; a relative deviation above 1e-6 raises StepInstability.
// Recorded states must stay within 1e-6 of the Bloch ball.
BlochTrajectory integrate(const BlochState& initial, const AtomCavityParams& p,
                          const DriveEnvelope& drive, const IntegratorConfig& cfg);

// Integrate from the ground state under CW drive until the derivative norm
// drops below convergence_tol * Gamma * max(1, |state|). Raises NonConvergence
// with the final residual if t_max is reached first.
BlochState relax_to_steady(const AtomCavityParams& p, const DriveCondition& d,
                           const IntegratorConfig& cfg);

}  // namespace cavityflip
