#pragma once

#include <stdexcept>
#include <string>

namespace cavityflip {

// Shared error taxonomy. The CLI maps these onto process exit codes.

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameter set for which the requested quantity is undefined
// (e.g. the saturation scale at beta = 0).
struct DegenerateParameter : std::domain_error {
  using std::domain_error::domain_error;
};

// Phase requested for a vanishing input field.
struct ZeroInput : std::domain_error {
  using std::domain_error::domain_error;
};

// Output amplitude too small relative to the input for its phase to mean
// anything (perfect absorption at beta = 0.5 on resonance).
struct DegenerateResponse : std::domain_error {
  using std::domain_error::domain_error;
};

// Half-step error estimate exceeded its bound; the step size is too large.
struct StepInstability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, double residual_)
      : std::runtime_error(what), residual(residual_) {}
  double residual;
};

// Steady state leaks into the top Fock level; increase the truncation.
struct TruncationTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSolve : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cavityflip
