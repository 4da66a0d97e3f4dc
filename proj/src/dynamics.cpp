#include "cavityflip/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cavityflip {

namespace {

void validate(const IntegratorConfig& cfg, const AtomCavityParams& p) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw InvalidParameter("dt must be finite and > 0");
  }
  if (cfg.dt * p.Gamma > 0.1) {
    throw InvalidParameter("dt * Gamma must be <= 0.1");
  }
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) {
    throw InvalidParameter("t_max must be finite and > 0");
  }
  if (!(cfg.convergence_tol > 0.0)) {
    throw InvalidParameter("convergence_tol must be > 0");
  }
  if (cfg.record_stride < 1) {
    throw InvalidParameter("record_stride must be >= 1");
  }
}

double state_norm(const BlochState& s) {
  return std::sqrt(std::norm(s.sigma_minus) + s.sigma_z * s.sigma_z);
}

BlochState advance(const BlochState& s, const BlochRate& k, double h) {
  BlochState out;
  out.sigma_minus = s.sigma_minus + h * k.d_sigma_minus;
  out.sigma_z = s.sigma_z + h * k.d_sigma_z;
  return out;
}

BlochState rk4_step(const BlochState& s, double t, double dt,
                    const AtomCavityParams& p, const DriveEnvelope& drive) {
  const BlochRate k1 = derivative(s, p, drive.envelope(t), drive.omega);
  const BlochRate k2 =
      derivative(advance(s, k1, 0.5 * dt), p, drive.envelope(t + 0.5 * dt), drive.omega);
  const BlochRate k3 =
      derivative(advance(s, k2, 0.5 * dt), p, drive.envelope(t + 0.5 * dt), drive.omega);
  const BlochRate k4 = derivative(advance(s, k3, dt), p, drive.envelope(t + dt), drive.omega);
  BlochState out;
  out.sigma_minus = s.sigma_minus + (dt / 6.0) * (k1.d_sigma_minus + 2.0 * k2.d_sigma_minus +
                                                  2.0 * k3.d_sigma_minus + k4.d_sigma_minus);
  out.sigma_z = s.sigma_z + (dt / 6.0) * (k1.d_sigma_z + 2.0 * k2.d_sigma_z +
                                          2.0 * k3.d_sigma_z + k4.d_sigma_z);
  return out;
}

// One dt step with its two-half-step error estimate. Advances with the full
// step; the half-step pair only gauges the local error.
BlochState checked_step(const BlochState& s, double t, double dt,
                        const AtomCavityParams& p, const DriveEnvelope& drive) {
  const BlochState full = rk4_step(s, t, dt, p, drive);
  const BlochState half =
      rk4_step(rk4_step(s, t, 0.5 * dt, p, drive), t + 0.5 * dt, 0.5 * dt, p, drive);
  const double deviation =
      std::sqrt(std::norm(full.sigma_minus - half.sigma_minus) +
                (full.sigma_z - half.sigma_z) * (full.sigma_z - half.sigma_z));
  if (!(deviation / std::max(1.0, state_norm(half)) <= 1e-6)) {
    throw StepInstability("half-step estimate deviates by more than 1e-6 at t = " +
                          std::to_string(t) + "; reduce dt");
  }
  return full;
}

}  // namespace

DriveEnvelope DriveEnvelope::cw(const DriveCondition& d) {
  DriveEnvelope e;
  e.omega = d.omega;
  e.envelope = [amplitude = d.amplitude](double) { return amplitude; };
  return e;
}

double fastest_rate(const AtomCavityParams& p, double omega, double peak_flux) {
  const double rabi = 2.0 * std::sqrt(2.0 * p.beta * p.Gamma * peak_flux);
  return std::max({p.Gamma, std::abs(omega), rabi});
}

IntegratorConfig default_integrator(const AtomCavityParams& p, double omega,
                                    double peak_flux) {
  IntegratorConfig cfg;
  cfg.dt = std::min(0.05 / fastest_rate(p, omega, peak_flux), 0.1 / p.Gamma);
  cfg.t_max = 40.0 / p.Gamma;
  return cfg;
}

double BlochRate::norm() const {
  return std::sqrt(std::norm(d_sigma_minus) + d_sigma_z * d_sigma_z);
}

BlochRate derivative(const BlochState& s, const AtomCavityParams& p, Complex b_in,
                     double omega) {
  const double coupling = std::sqrt(2.0 * p.beta * p.Gamma);
  BlochRate rate;
  rate.d_sigma_minus =
      -Complex(p.Gamma, omega) * s.sigma_minus + 2.0 * coupling * b_in * s.sigma_z;
  rate.d_sigma_z = -2.0 * p.Gamma * (s.sigma_z + 0.5) -
                   coupling * 2.0 * std::real(std::conj(b_in) * s.sigma_minus);
  return rate;
}

BlochTrajectory integrate(const BlochState& initial, const AtomCavityParams& p,
                          const DriveEnvelope& drive, const IntegratorConfig& cfg) {
  validate(cfg, p);
  if (!drive.envelope) {
    throw InvalidParameter("drive envelope not set");
  }
  if (initial.ball_excess() > 1e-9) {
    throw InvalidParameter("initial state outside the Bloch ball");
  }

  const long n_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt - 1e-9));
  BlochTrajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);

  auto record = [&](double t, const BlochState& s) {
    if (s.ball_excess() > 1e-6) {
      throw StepInstability("trajectory left the Bloch ball at t = " + std::to_string(t) +
                            "; reduce dt");
    }
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.b_out.push_back(input_output(p, drive.envelope(t), s.sigma_minus));
  };

  BlochState state = initial;
  record(0.0, state);
  for (long i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    state = checked_step(state, t, cfg.dt, p, drive);
    if ((i + 1) % cfg.record_stride == 0 || i + 1 == n_steps) {
      record(static_cast<double>(i + 1) * cfg.dt, state);
    }
  }
  return traj;
}

BlochState relax_to_steady(const AtomCavityParams& p, const DriveCondition& d,
                           const IntegratorConfig& cfg) {
  validate(cfg, p);
  const DriveEnvelope drive = DriveEnvelope::cw(d);

  BlochState state = ground_state();
  double t = 0.0;
  double residual = derivative(state, p, d.amplitude, d.omega).norm();
  while (t < cfg.t_max) {
    if (residual < cfg.convergence_tol * p.Gamma * std::max(1.0, state_norm(state))) {
      return state;
    }
    state = checked_step(state, t, cfg.dt, p, drive);
    t += cfg.dt;
    residual = derivative(state, p, d.amplitude, d.omega).norm();
  }
  if (residual < cfg.convergence_tol * p.Gamma * std::max(1.0, state_norm(state))) {
    return state;
  }
  throw NonConvergence("no steady state within t_max = " + std::to_string(cfg.t_max) +
                           "; residual " + std::to_string(residual),
                       residual);
}

}  // namespace cavityflip
