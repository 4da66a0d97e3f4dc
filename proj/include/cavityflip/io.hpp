#pragma once

#include <optional>
#include <string>

#include "cavityflip/params.hpp"
#include "cavityflip/response.hpp"

namespace cavityflip {

inline constexpr const char* kVersion = "0.1.0";

enum class RunMode { Steady, PhaseSpectrum, IntensitySweep, Dynamics, MaxPhase, VerifyOracle };
enum class OutputFormat { Csv, Json };

const char* mode_name(RunMode mode);

struct RunConfig {
  RunMode mode = RunMode::Steady;

  // Exactly one parameter block: raw {g, kappa, gamma} or canonical {Gamma, beta}.
  std::optional<RawCavityParams> raw;
  std::optional<AtomCavityParams> canonical;

  // drive block
  std::optional<double> omega;
  std::optional<double> flux;

  // grid block (phase-spectrum): omega/Gamma range
  struct Grid {
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
  };
  std::optional<Grid> grid;

  // flux_decades block (intensity-sweep): decades around the saturation scale
  struct FluxDecades {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
  };
  std::optional<FluxDecades> flux_decades;

  // integrator block (dynamics); unset fields use defaults derived from the drive
  struct Integrator {
    std::optional<double> dt;
    std::optional<double> t_max;
    std::optional<double> convergence_tol;
    std::optional<int> record_stride;
  };
  Integrator integrator;

  // oracle block (verify-oracle)
  int truncation = 12;

  // output block
  std::string out_path;  // defaults to "<mode>.csv" / ".json"
  OutputFormat format = OutputFormat::Csv;

  AtomCavityParams params() const;
};

// Parse and validate a strict JSON config: unknown keys are rejected, and the
// blocks the mode requires must be present.
RunConfig parse_config(const std::string& json_text);

// Dispatch to the owning module, write the artifact file, print a one-line
// summary to stdout. Throws the module's error on failure.
void run(const RunConfig& cfg);

// run() with errors mapped to exit codes: 0 success, 2 invalid config,
// 3 degenerate response, 4 non-convergence, 5 I/O failure.
int execute(const RunConfig& cfg);

// Round-trip-safe float formatting used for all file output (17 significant
// digits, "nan"/"inf" spelled out).
std::string format_double(double value);

}  // namespace cavityflip
