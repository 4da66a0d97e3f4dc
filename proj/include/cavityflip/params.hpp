#pragma once

#include "cavityflip/errors.hpp"

namespace cavityflip {

// Physical rates of the atom-cavity system, all in one inverse-time unit.
// kappa is the field (amplitude) decay rate of the cavity mode, so the
// photon energy decay rate is 2*kappa. g = 0 models an empty cavity.
struct RawCavityParams {
  double g;      // atom-field coupling rate, >= 0
  double kappa;  // cavity field decay rate, > 0
  double gamma;  // spontaneous emission into non-cavity modes, >= 0

  RawCavityParams(double g_, double kappa_, double gamma_);

  // kappa/g. Large values indicate the bad-cavity regime where the
  // eliminated model is trustworthy; +inf for an empty cavity.
  double bad_cavity_ratio() const;
};

// Canonical parameters of the eliminated model. Everything downstream of
// the conversion depends on these two numbers only.
struct AtomCavityParams {
  double Gamma;  // dipole relaxation rate
  double beta;   // fraction of spontaneous emission routed through the cavity

  AtomCavityParams(double Gamma_, double beta_);
};

// Gamma = g^2/kappa + gamma/2, beta = (g^2/kappa)/Gamma.
AtomCavityParams derive(const RawCavityParams& raw);

// Raw rates for a given cavity decay: g = sqrt(beta*Gamma*kappa),
// gamma = 2*(1-beta)*Gamma. derive(invert(p, kappa)) == p up to rounding.
RawCavityParams invert(const AtomCavityParams& canonical, double kappa);

// Photon flux Gamma/beta at which the nonlinear response sets in.
double saturation_scale(const AtomCavityParams& canonical);

}  // namespace cavityflip
