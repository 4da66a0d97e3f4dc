#include "cavityflip/response.hpp"

#include <cmath>
#include <numbers>

namespace cavityflip {

DriveCondition::DriveCondition(Complex amplitude_, double omega_)
    : amplitude(amplitude_), omega(omega_) {
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
    throw InvalidParameter("drive amplitude must be finite");
  }
  if (!std::isfinite(omega)) {
    throw InvalidParameter("omega must be finite");
  }
}

double BlochState::ball_excess() const {
  return 4.0 * (std::norm(sigma_minus) + sigma_z * sigma_z) - 1.0;
}

double degrees(double radians) {
  return radians * (180.0 / std::numbers::pi);
}

BlochState steady_state(const AtomCavityParams& p, const DriveCondition& d) {
  const double G = p.Gamma;
  const double w = d.omega;
  const double denom = G * G + w * w + 4.0 * p.beta * G * d.flux();
  BlochState s;
  s.sigma_z = -(G * G + w * w) / (2.0 * denom);
  s.sigma_minus =
      -std::sqrt(2.0 * p.beta * G) * Complex(G, -w) * d.amplitude / denom;
  return s;
}

Complex input_output(const AtomCavityParams& p, Complex b_in, Complex sigma_minus) {
  return b_in + std::sqrt(2.0 * p.beta * p.Gamma) * sigma_minus;
}

ReflectionResponse output_amplitude(const AtomCavityParams& p, const DriveCondition& d) {
  if (d.amplitude == Complex(0.0, 0.0)) {
    throw ZeroInput("phase undefined for zero input amplitude");
  }
  const double G = p.Gamma;
  const double w = d.omega;
  const Complex numerator =
      Complex((1.0 - 2.0 * p.beta) * G, w) * Complex(G, -w) + 4.0 * p.beta * G * d.flux();
  const double denominator = G * G + w * w + 4.0 * p.beta * G * d.flux();
  const Complex ratio = numerator / denominator;
  if (std::abs(ratio) < 1e-14) {
    throw DegenerateResponse("output amplitude below 1e-14 of the input; phase undefined");
  }
  ReflectionResponse r;
  r.b_out = ratio * d.amplitude;
  r.phase_deg = degrees(std::arg(ratio));
  r.reflectivity = std::norm(ratio);
  return r;
}

Complex weak_field_ratio(const AtomCavityParams& p, double omega) {
  return Complex(p.Gamma * (1.0 - 2.0 * p.beta), omega) / Complex(p.Gamma, omega);
}

double nonlinear_phase_shift(double beta, double omega_over_Gamma) {
  if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0) {
    throw InvalidParameter("beta must be in [0, 1]");
  }
  if (!std::isfinite(omega_over_Gamma)) {
    throw InvalidParameter("omega/Gamma must be finite");
  }
  const double c = 1.0 - 2.0 * beta;
  const double x = omega_over_Gamma;
  if (c == 0.0 && x == 0.0) {
    throw DegenerateResponse("phase shift undefined at beta = 0.5, omega = 0");
  }
  const double weak = std::acos(c / std::hypot(c, x));
  const double saturated = std::acos(1.0 / std::hypot(1.0, x));
  return degrees(weak - saturated);
}

double linear_reflectivity(double beta, double omega_over_Gamma) {
  if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0) {
    throw InvalidParameter("beta must be in [0, 1]");
  }
  if (!std::isfinite(omega_over_Gamma)) {
    throw InvalidParameter("omega/Gamma must be finite");
  }
  const double c = 1.0 - 2.0 * beta;
  const double x = omega_over_Gamma;
  return (c * c + x * x) / (1.0 + x * x);
}

std::vector<std::optional<ReflectionResponse>> response_vs_intensity(
    const AtomCavityParams& p, double omega, const std::vector<double>& flux_grid) {
  for (std::size_t i = 0; i < flux_grid.size(); ++i) {
    if (!(flux_grid[i] >= 0.0) || !std::isfinite(flux_grid[i])) {
      throw InvalidParameter("flux grid values must be finite and >= 0");
    }
    if (i > 0 && !(flux_grid[i] > flux_grid[i - 1])) {
      throw InvalidParameter("flux grid must be strictly increasing");
    }
  }
  std::vector<std::optional<ReflectionResponse>> out;
  out.reserve(flux_grid.size());
  for (double flux : flux_grid) {
    try {
      out.push_back(output_amplitude(p, DriveCondition(std::sqrt(flux), omega)));
    } catch (const ZeroInput&) {
      out.push_back(std::nullopt);
    } catch (const DegenerateResponse&) {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace cavityflip
