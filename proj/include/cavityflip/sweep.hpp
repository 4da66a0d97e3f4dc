#pragma once

#include <string>
#include <vector>

#include "cavityflip/params.hpp"
#include "cavityflip/response.hpp"

namespace cavityflip {

// Phase-shift and reflectivity spectrum over a dimensionless detuning grid.
struct SpectrumResult {
  double beta = 0.0;
  std::vector<double> omega_over_Gamma;
  std::vector<double> phase_deg;     // NaN at flagged points
  std::vector<double> reflectivity;
  std::vector<char> degenerate;      // per-point flag
  std::string grid_spec;
};

SpectrumResult phase_spectrum(double beta, const std::vector<double>& grid);

struct MaxPhaseResult {
  double beta = 0.0;
  double omega_star_over_Gamma = 0.0;
  double phase_star_deg = 0.0;
  int iterations = 0;
  // beta = 0.5 only: the supremum is approached as omega -> 0+ but the
  // phase is undefined at omega = 0 itself.
  bool open_supremum = false;
};

// Maximize the nonlinear phase shift over omega/Gamma in [0, 10]: coarse grid
// (step 0.01), then golden-section refinement to |d omega/Gamma| < 1e-6.
// beta > 0.5 returns omega* = 0 with 180 degrees.
MaxPhaseResult find_max_phase(double beta);

struct IntensityPoint {
  double flux = 0.0;
  double phase_deg = 0.0;     // NaN when degenerate
  double reflectivity = 0.0;  // NaN when degenerate
  bool degenerate = false;
};

// Logarithmic flux grid of `points` values spanning 10^lo..10^hi times the
// saturation scale Gamma/beta (times Gamma when beta = 0, where the response
// is flat anyway).
std::vector<IntensityPoint> intensity_transition(const AtomCavityParams& p, double omega,
                                                 double lo_decade, double hi_decade,
                                                 int points);

// Smallest beta on the phase-flip branch (beta > 1/2) with resonant
// weak-field efficiency eta: beta = (1 + sqrt(eta))/2. Accepts eta in [0, 1].
double required_beta_for_efficiency(double eta_target);

}  // namespace cavityflip
