#include "cavityflip/oracle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace cavityflip {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double relative_deviation(Complex value, Complex reference) {
  const double scale = std::abs(reference);
  if (scale == 0.0) return std::abs(value - reference);
  return std::abs(value - reference) / scale;
}

}  // namespace

FullModel::FullModel(RawCavityParams raw_, DriveCondition drive_, int truncation_)
    : raw(raw_), drive(drive_), truncation(truncation_) {
  if (truncation < 1) {
    throw InvalidParameter("truncation must be >= 1");
  }
}

AtomFieldOperators build_operators(int truncation) {
  const int nf = truncation + 1;
  MatrixXcd a_fock = MatrixXcd::Zero(nf, nf);
  for (int n = 1; n < nf; ++n) {
    a_fock(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  MatrixXcd sm_atom = MatrixXcd::Zero(2, 2);
  sm_atom(0, 1) = 1.0;  // |g><e|
  MatrixXcd sz_atom = MatrixXcd::Zero(2, 2);
  sz_atom(0, 0) = -0.5;
  sz_atom(1, 1) = 0.5;
  const MatrixXcd id_atom = MatrixXcd::Identity(2, 2);
  const MatrixXcd id_fock = MatrixXcd::Identity(nf, nf);

  AtomFieldOperators ops;
  ops.a = Eigen::kroneckerProduct(id_atom, a_fock);
  ops.sigma_minus = Eigen::kroneckerProduct(sm_atom, id_fock);
  ops.sigma_z = Eigen::kroneckerProduct(sz_atom, id_fock);
  return ops;
}

Eigen::MatrixXcd build_hamiltonian(const FullModel& m) {
  const AtomFieldOperators ops = build_operators(m.truncation);
  const MatrixXcd ad = ops.a.adjoint();
  const MatrixXcd sp = ops.sigma_minus.adjoint();
  const Complex i(0.0, 1.0);
  const Complex b = m.drive.amplitude;
  MatrixXcd h = m.drive.omega * (ad * ops.a + sp * ops.sigma_minus);
  h += i * m.raw.g * (ad * ops.sigma_minus - ops.a * sp);
  h += i * std::sqrt(2.0 * m.raw.kappa) * (b * ad - std::conj(b) * ops.a);
  return h;
}

Eigen::MatrixXcd build_generator(const FullModel& m) {
  const int d = m.dim();
  const MatrixXcd h = build_hamiltonian(m);
  const MatrixXcd id = MatrixXcd::Identity(d, d);
  const Complex i(0.0, 1.0);

  // vec(A rho B) = (B^T kron A) vec(rho), column-major.
  MatrixXcd gen = -i * (Eigen::kroneckerProduct(id, h) -
                        Eigen::kroneckerProduct(h.transpose(), id));

  const AtomFieldOperators ops = build_operators(m.truncation);
  std::vector<MatrixXcd> collapse;
  collapse.push_back(std::sqrt(2.0 * m.raw.kappa) * ops.a);
  if (m.raw.gamma > 0.0) {
    collapse.push_back(std::sqrt(m.raw.gamma) * ops.sigma_minus);
  }
  for (const MatrixXcd& c : collapse) {
    const MatrixXcd cdc = c.adjoint() * c;
    gen += Eigen::kroneckerProduct(c.conjugate(), c);
    gen -= 0.5 * Eigen::kroneckerProduct(id, cdc);
    gen -= 0.5 * Eigen::kroneckerProduct(cdc.transpose(), id);
  }
  return gen;
}

double top_level_population(const Eigen::MatrixXcd& rho) {
  const int d = static_cast<int>(rho.rows());
  const int nf = d / 2;  // Fock levels per atom state
  const int n_top = nf - 1;
  // atom-major ordering: index = atom * nf + fock
  return std::real(rho(n_top, n_top) + rho(nf + n_top, nf + n_top));
}

SteadySolution steady_density(const FullModel& m) {
  const int d = m.dim();
  const MatrixXcd gen = build_generator(m);

  // Replace the first row with the trace functional; solve L x = e0.
  MatrixXcd constrained = gen;
  constrained.row(0).setZero();
  for (int k = 0; k < d; ++k) {
    constrained(0, k * d + k) = 1.0;
  }
  VectorXcd rhs = VectorXcd::Zero(d * d);
  rhs(0) = 1.0;

  const VectorXcd x = constrained.partialPivLu().solve(rhs);
  if (!x.allFinite()) {
    throw SingularSolve("steady-state solve produced non-finite entries");
  }

  MatrixXcd rho = Eigen::Map<const MatrixXcd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();

  SteadySolution sol;
  sol.method = "direct-solve";
  const VectorXcd vec_rho = Eigen::Map<const VectorXcd>(rho.data(), d * d);
  sol.residual = (gen * vec_rho).cwiseAbs().maxCoeff();
  if (sol.residual > 1e-8) {
    throw SingularSolve("steady-state residual " + std::to_string(sol.residual) +
                        " exceeds 1e-8");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-10) {
    throw SingularSolve("steady-state trace deviates from 1");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw SingularSolve("steady state not positive semidefinite");
  }
  if (top_level_population(rho) >= 1e-6) {
    throw TruncationTooSmall("top Fock level population " +
                             std::to_string(top_level_population(rho)) +
                             " >= 1e-6; increase the truncation");
  }
  sol.rho = std::move(rho);
  return sol;
}

Expectations expectations(const Eigen::MatrixXcd& rho) {
  const int truncation = static_cast<int>(rho.rows()) / 2 - 1;
  const AtomFieldOperators ops = build_operators(truncation);
  Expectations e;
  e.a = (ops.a * rho).trace();
  e.sigma_minus = (ops.sigma_minus * rho).trace();
  e.sigma_z = std::real((ops.sigma_z * rho).trace());
  return e;
}

Complex output_from_field(const FullModel& m, Complex a_mean) {
  return std::sqrt(2.0 * m.raw.kappa) * a_mean - m.drive.amplitude;
}

OracleReport verify_oracle(const FullModel& m) {
  const SteadySolution sol = steady_density(m);
  const AtomCavityParams canonical = derive(m.raw);

  OracleReport report{m.raw,
                      canonical,
                      m.truncation,
                      sol.residual,
                      sol.method,
                      expectations(sol.rho),
                      steady_state(canonical, m.drive),
                      Complex(0.0),
                      Complex(0.0),
                      Complex(0.0),
                      0.0};
  report.b_out_full = output_from_field(m, report.full.a);
  report.b_out_eliminated_form =
      input_output(canonical, m.drive.amplitude, report.full.sigma_minus);
  report.b_out_eliminated =
      input_output(canonical, m.drive.amplitude, report.eliminated.sigma_minus);

  const double err_sm =
      relative_deviation(report.full.sigma_minus, report.eliminated.sigma_minus);
  const double err_sz = relative_deviation(report.full.sigma_z, report.eliminated.sigma_z);
  const double err_bout = relative_deviation(report.b_out_full, report.b_out_eliminated);
  report.elimination_error = std::max({err_sm, err_sz, err_bout});
  return report;
}

double elimination_error(const FullModel& m) {
  return verify_oracle(m).elimination_error;
}

}  // namespace cavityflip
