#pragma once

#include <string>

#include <Eigen/Dense>

#include "cavityflip/params.hpp"
#include "cavityflip/response.hpp"

namespace cavityflip {

// Full driven atom-cavity master equation on a truncated Fock space, used as
// an independent check on the eliminated model.
//
// Conventions (frame rotating at the drive, cavity resonant with the atom):
//   H = omega (a^dag a + s+ s-) + i g (a^dag s- - a s+)
//       + i sqrt(2 kappa) (b_in a^dag - conj(b_in) a)
// with collapse operators sqrt(2 kappa) a and sqrt(gamma) s-, and reflected
// field b_out = sqrt(2 kappa) <a> - b_in. This is the unique sign set (up to
// U(1) redefinitions) whose bad-cavity limit reproduces steady_state() with
// Gamma, beta from derive(), and which reflects b_out = b_in off an empty
// resonant cavity. Both properties are pinned by tests, not assumed.
struct FullModel {
  RawCavityParams raw;
  DriveCondition drive;
  int truncation;  // max photon number N; Hilbert space dimension 2(N+1)

  FullModel(RawCavityParams raw_, DriveCondition drive_, int truncation_);
  int dim() const { return 2 * (truncation + 1); }
};

// Operators on the atom (x) Fock product space, atom index major.
struct AtomFieldOperators {
  Eigen::MatrixXcd a;            // cavity annihilation
  Eigen::MatrixXcd sigma_minus;  // atomic lowering
  Eigen::MatrixXcd sigma_z;      // inversion, diag(-1/2, +1/2) on the atom
};

AtomFieldOperators build_operators(int truncation);

Eigen::MatrixXcd build_hamiltonian(const FullModel& m);

// Lindblad generator as a dense matrix acting on the column-major vec of rho.
Eigen::MatrixXcd build_generator(const FullModel& m);

struct SteadySolution {
  Eigen::MatrixXcd rho;
  double residual;     // max |L vec(rho)| after the solve
  std::string method;  // "direct-solve"
};

// Solve generator(rho) = 0 under the trace-1 constraint by a direct linear
// solve. Validates hermiticity, trace, positivity, and that the top Fock
// level stays unpopulated (< 1e-6), else throws.
SteadySolution steady_density(const FullModel& m);

struct Expectations {
  Complex a;
  Complex sigma_minus;
  double sigma_z;
};

// Trace pairings <a>, <sigma_->, <sigma_z>. Dimension inferred from rho.
Expectations expectations(const Eigen::MatrixXcd& rho);

// Population of the top Fock level; validity requires it to be < 1e-6.
double top_level_population(const Eigen::MatrixXcd& rho);

// Full input-output form of the reflected field.
Complex output_from_field(const FullModel& m, Complex a_mean);

struct OracleReport {
  RawCavityParams raw;
  AtomCavityParams canonical;
  int truncation;
  double residual;
  std::string method;
  Expectations full;              // full-model steady expectations
  BlochState eliminated;          // steady_state() at derive(raw)
  Complex b_out_full;             // sqrt(2 kappa) <a> - b_in
  Complex b_out_eliminated_form;  // b_in + sqrt(2 beta Gamma) <sigma_->_full
  Complex b_out_eliminated;       // closed-form response of the eliminated model
  double elimination_error;       // max relative deviation over sigma_-, sigma_z, b_out
};

OracleReport verify_oracle(const FullModel& m);

// Max relative deviation of (<sigma_->, <sigma_z>, b_out) between the full
// model and the eliminated model. Deviations against a zero reference are
// reported absolutely.
double elimination_error(const FullModel& m);

}  // namespace cavityflip
