#include "cavityflip/params.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cavityflip {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be finite");
  }
}

}  // namespace

RawCavityParams::RawCavityParams(double g_, double kappa_, double gamma_)
    : g(g_), kappa(kappa_), gamma(gamma_) {
  require_finite(g, "g");
  require_finite(kappa, "kappa");
  require_finite(gamma, "gamma");
  if (g < 0.0) throw InvalidParameter("g must be >= 0");
  if (kappa <= 0.0) throw InvalidParameter("kappa must be > 0");
  if (gamma < 0.0) throw InvalidParameter("gamma must be >= 0");
}

double RawCavityParams::bad_cavity_ratio() const {
  if (g == 0.0) return std::numeric_limits<double>::infinity();
  return kappa / g;
}

AtomCavityParams::AtomCavityParams(double Gamma_, double beta_)
    : Gamma(Gamma_), beta(beta_) {
  require_finite(Gamma, "Gamma");
  require_finite(beta, "beta");
  if (Gamma <= 0.0) throw InvalidParameter("Gamma must be > 0");
  if (beta < 0.0 || beta > 1.0) throw InvalidParameter("beta must be in [0, 1]");
}

AtomCavityParams derive(const RawCavityParams& raw) {
  const double cavity_rate = raw.g * raw.g / raw.kappa;
  const double Gamma = cavity_rate + 0.5 * raw.gamma;
  if (Gamma <= 0.0) {
    throw InvalidParameter("derive requires g > 0 or gamma > 0");
  }
  return AtomCavityParams(Gamma, cavity_rate / Gamma);
}

RawCavityParams invert(const AtomCavityParams& canonical, double kappa) {
  require_finite(kappa, "kappa");
  if (kappa <= 0.0) throw InvalidParameter("kappa must be > 0");
  const double g = std::sqrt(canonical.beta * canonical.Gamma * kappa);
  const double gamma = 2.0 * (1.0 - canonical.beta) * canonical.Gamma;
  return RawCavityParams(g, kappa, gamma);
}

double saturation_scale(const AtomCavityParams& canonical) {
  if (canonical.beta == 0.0) {
    throw DegenerateParameter("saturation scale undefined at beta = 0");
  }
  return canonical.Gamma / canonical.beta;
}

}  // namespace cavityflip
