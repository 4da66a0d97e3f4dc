#include <cmath>
#include <complex>

#include <doctest.h>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cavityflip/oracle.hpp"

using namespace cavityflip;

namespace {

// Bad-cavity reference: kappa/g sets the regime, beta and the flux (in units
// of the saturation scale) set the eliminated model.
FullModel reference_model(double kappa_over_g, double beta, double flux_factor,
                          double omega_over_Gamma = 0.0, int truncation = 12) {
  const double g = 1.0;
  const double kappa = kappa_over_g * g;
  const double Gamma = g * g / kappa / beta;
  const double gamma = 2.0 * (1.0 - beta) * Gamma;
  const RawCavityParams raw(g, kappa, gamma);
  const double flux = flux_factor * Gamma / beta;
  return FullModel(raw, DriveCondition(std::sqrt(flux), omega_over_Gamma * Gamma),
                   truncation);
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Long-time propagation route: repeated application of exp(L tau) until the
// residual falls below 1e-10. Independent of the direct solve it checks.
Eigen::MatrixXcd steady_by_propagation(const FullModel& m) {
  const int d = m.dim();
  const Eigen::MatrixXcd gen = build_generator(m);
  const AtomCavityParams canonical = derive(m.raw);
  const double tau = 2.0 / canonical.Gamma;  // slowest scale in the problem
  const Eigen::MatrixXcd propagator = (gen * tau).exp();

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(0, 0) = 1.0;  // ground (x) vacuum
  Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
  for (int step = 0; step < 400; ++step) {
    vec = propagator * vec;
    if ((gen * vec).cwiseAbs().maxCoeff() < 1e-10) break;
  }
  REQUIRE((gen * vec).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::MatrixXcd out = Eigen::Map<const Eigen::MatrixXcd>(vec.data(), d, d);
  return 0.5 * (out + out.adjoint()).eval();
}

}  // namespace

TEST_CASE("generator annihilates the dark state of the undriven system") {
  const FullModel m(RawCavityParams(0.0, 1.0, 0.1), DriveCondition(0.0, 0.0), 4);
  const Eigen::MatrixXcd gen = build_generator(m);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(m.dim(), m.dim());
  rho(0, 0) = 1.0;
  const Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(rho.data(), m.dim() * m.dim());
  CHECK((gen * vec).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empty resonant cavity reflects the input unchanged") {
  const FullModel m(RawCavityParams(0.0, 1.0, 0.2), DriveCondition(std::sqrt(0.01), 0.0), 12);
  const SteadySolution sol = steady_density(m);
  const Expectations e = expectations(sol.rho);

  // coherent state: photon number 2|b_in|^2/kappa
  const AtomFieldOperators ops = build_operators(m.truncation);
  const double n_mean = std::real((ops.a.adjoint() * ops.a * sol.rho).trace());
  CHECK(n_mean == doctest::Approx(0.02).epsilon(1e-8));

  const Complex b_out = output_from_field(m, e.a);
  CHECK(std::abs(std::abs(b_out / m.drive.amplitude) - 1.0) < 1e-8);
  // atom stays in the ground state
  CHECK(e.sigma_z == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(std::abs(e.sigma_minus) < 1e-10);
}

TEST_CASE("undriven steady state is vacuum (x) ground") {
  const FullModel m(RawCavityParams(1.0, 20.0, 0.05), DriveCondition(0.0, 0.0), 6);
  const SteadySolution sol = steady_density(m);
  Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(m.dim(), m.dim());
  projector(0, 0) = 1.0;
  CHECK(trace_distance(sol.rho, projector) < 1e-8);
}

TEST_CASE("steady density satisfies the state invariants") {
  const FullModel m = reference_model(20.0, 0.8, 0.01);
  const SteadySolution sol = steady_density(m);
  CHECK(sol.method == "direct-solve");
  CHECK(sol.residual < 1e-10);
  CHECK((sol.rho - sol.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(sol.rho.trace() - Complex(1.0, 0.0)) < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sol.rho, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
  CHECK(top_level_population(sol.rho) < 1e-6);
}

TEST_CASE("expectations on hand-built states") {
  const int n = 3;
  const int dim = 2 * (n + 1);
  Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(dim, dim);
  ground(0, 0) = 1.0;  // atom |g>, vacuum
  Expectations e = expectations(ground);
  CHECK(std::abs(e.a) == 0.0);
  CHECK(std::abs(e.sigma_minus) == 0.0);
  CHECK(e.sigma_z == doctest::Approx(-0.5).epsilon(1e-15));

  Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(dim, dim);
  excited(n + 1, n + 1) = 1.0;  // atom |e>, vacuum
  e = expectations(excited);
  CHECK(std::abs(e.a) == 0.0);
  CHECK(std::abs(e.sigma_minus) == 0.0);
  CHECK(e.sigma_z == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bad-cavity limit reproduces the eliminated model within 2%") {
  const FullModel m = reference_model(50.0, 0.8, 0.01);
  const OracleReport report = verify_oracle(m);
  const double rel_sm = std::abs(report.full.sigma_minus - report.eliminated.sigma_minus) /
                        std::abs(report.eliminated.sigma_minus);
  CHECK(rel_sm < 0.02);
  CHECK(std::abs(report.full.sigma_z - report.eliminated.sigma_z) /
            std::abs(report.eliminated.sigma_z) <
        0.02);
  CHECK(report.elimination_error < 0.02);

  // the two output-field routes agree within the elimination error
  CHECK(std::abs(report.b_out_full - report.b_out_eliminated_form) <=
        report.elimination_error * std::abs(m.drive.amplitude) + 1e-12);
}

TEST_CASE("elimination error shrinks as the cavity gets worse") {
  const double err5 = elimination_error(reference_model(5.0, 0.8, 0.01));
  const double err50 = elimination_error(reference_model(50.0, 0.8, 0.01));
  CHECK(err5 > err50);
}

TEST_CASE("elimination error vanishes for the empty cavity field ratio") {
  const FullModel m(RawCavityParams(0.0, 1.0, 0.2), DriveCondition(std::sqrt(0.01), 0.0), 12);
  const OracleReport report = verify_oracle(m);
  CHECK(std::abs(report.b_out_full - report.b_out_eliminated) /
            std::abs(report.b_out_eliminated) <
        1e-8);
}

TEST_CASE("truncation convergence: N -> N+4 moves nothing above 1e-8") {
  const OracleReport a = verify_oracle(reference_model(20.0, 0.8, 0.01, 0.0, 12));
  const OracleReport b = verify_oracle(reference_model(20.0, 0.8, 0.01, 0.0, 16));
  CHECK(std::abs(a.full.a - b.full.a) < 1e-8);
  CHECK(std::abs(a.full.sigma_minus - b.full.sigma_minus) < 1e-8);
  CHECK(std::abs(a.full.sigma_z - b.full.sigma_z) < 1e-8);
}

TEST_CASE("direct solve agrees with long-time propagation") {
  const FullModel m = reference_model(10.0, 0.8, 0.01, 0.0, 6);
  const SteadySolution direct = steady_density(m);
  const Eigen::MatrixXcd propagated = steady_by_propagation(m);
  CHECK((direct.rho - propagated).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("overfilled truncation is rejected") {
  // strong drive on a nearly empty cavity: ~10 photons in a 1-photon space
  const FullModel m(RawCavityParams(0.1, 1.0, 0.2), DriveCondition(std::sqrt(5.0), 0.0), 1);
  CHECK_THROWS_AS(steady_density(m), TruncationTooSmall);
  CHECK_THROWS_AS(FullModel(RawCavityParams(1.0, 10.0, 0.0), DriveCondition(0.0, 0.0), 0),
                  InvalidParameter);
}
