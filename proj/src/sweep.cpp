#include "cavityflip/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cavityflip {

namespace {

constexpr double kSearchUpper = 10.0;  // omega/Gamma window; the shift decays beyond
constexpr double kCoarseStep = 0.01;
constexpr double kRefineTol = 1e-6;

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

SpectrumResult phase_spectrum(double beta, const std::vector<double>& grid) {
  if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0) {
    throw InvalidParameter("beta must be in [0, 1]");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw InvalidParameter("grid values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidParameter("grid must be strictly increasing");
    }
  }
  SpectrumResult result;
  result.beta = beta;
  result.omega_over_Gamma = grid;
  result.phase_deg.reserve(grid.size());
  result.reflectivity.reserve(grid.size());
  result.degenerate.reserve(grid.size());
  for (double x : grid) {
    result.reflectivity.push_back(linear_reflectivity(beta, x));
    try {
      result.phase_deg.push_back(nonlinear_phase_shift(beta, x));
      result.degenerate.push_back(0);
    } catch (const DegenerateResponse&) {
      result.phase_deg.push_back(quiet_nan());
      result.degenerate.push_back(1);
    }
  }
  return result;
}

MaxPhaseResult find_max_phase(double beta) {
  if (!std::isfinite(beta) || beta <= 0.0 || beta > 1.0) {
    throw InvalidParameter("beta must be in (0, 1]");
  }
  MaxPhaseResult result;
  result.beta = beta;

  if (beta == 0.5) {
    // Perfect absorption at omega = 0: the weak-field phase tends to 90 deg
    // as omega -> 0+ but is undefined at 0 itself.
    result.omega_star_over_Gamma = 0.0;
    result.phase_star_deg = nonlinear_phase_shift(0.5, 1e-12);
    result.open_supremum = true;
    return result;
  }
  if (beta > 0.5) {
    result.omega_star_over_Gamma = 0.0;
    result.phase_star_deg = nonlinear_phase_shift(beta, 0.0);
    return result;
  }

  auto phase = [beta](double x) { return nonlinear_phase_shift(beta, x); };

  // Coarse scan for the global argmax. Refining only inside the one-step
  // bracket around it guards the golden section against multi-modality:
  // whatever the landscape elsewhere, this bracket holds a single peak.
  const int n = static_cast<int>(std::round(kSearchUpper / kCoarseStep));
  double best_x = 0.0;
  double best_phase = phase(0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = i * kCoarseStep;
    const double value = phase(x);
    if (value > best_phase) {
      best_phase = value;
      best_x = x;
    }
  }

  double lo = std::max(0.0, best_x - kCoarseStep);
  double hi = std::min(kSearchUpper, best_x + kCoarseStep);

  // Golden-section ascent, tracking the best sample seen so the result
  // dominates every evaluation.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = phase(c);
  double fd = phase(d);
  int iterations = 0;
  while (hi - lo > kRefineTol) {
    ++iterations;
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = phase(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = phase(d);
    }
    if (fc > best_phase) {
      best_phase = fc;
      best_x = c;
    }
    if (fd > best_phase) {
      best_phase = fd;
      best_x = d;
    }
  }

  result.omega_star_over_Gamma = best_x;
  result.phase_star_deg = best_phase;
  result.iterations = iterations;
  return result;
}

std::vector<IntensityPoint> intensity_transition(const AtomCavityParams& p, double omega,
                                                 double lo_decade, double hi_decade,
                                                 int points) {
  if (!(lo_decade < hi_decade)) {
    throw InvalidParameter("decade range requires lo < hi");
  }
  if (points < 2) {
    throw InvalidParameter("at least 2 grid points required");
  }
  const double scale = p.beta > 0.0 ? saturation_scale(p) : p.Gamma;

  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double decade = lo_decade + (hi_decade - lo_decade) * i / (points - 1);
    grid[static_cast<std::size_t>(i)] = scale * std::pow(10.0, decade);
  }
  const auto responses = response_vs_intensity(p, omega, grid);

  std::vector<IntensityPoint> table(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table[i].flux = grid[i];
    if (responses[i]) {
      table[i].phase_deg = responses[i]->phase_deg;
      table[i].reflectivity = responses[i]->reflectivity;
    } else {
      table[i].phase_deg = quiet_nan();
      table[i].reflectivity = quiet_nan();
      table[i].degenerate = true;
    }
  }
  return table;
}

double required_beta_for_efficiency(double eta_target) {
  if (!std::isfinite(eta_target) || eta_target < 0.0 || eta_target > 1.0) {
    throw InvalidParameter("efficiency target must be in [0, 1]");
  }
  return 0.5 * (1.0 + std::sqrt(eta_target));
}

}  // namespace cavityflip
