#include "cavityflip/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cavityflip/dynamics.hpp"
#include "cavityflip/oracle.hpp"
#include "cavityflip/sweep.hpp"

namespace cavityflip {

namespace {

using nlohmann::json;

const char* kModeNames[] = {"steady",   "phase-spectrum", "intensity-sweep",
                            "dynamics", "max-phase",      "verify-oracle"};

RunMode mode_from_string(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kModeNames[i]) return static_cast<RunMode>(i);
  }
  throw ConfigError("unknown mode '" + name + "'");
}

void reject_unknown_keys(const json& object, const char* block,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string("unknown key '") + item.key() + "' in " + block);
    }
  }
}

double number_field(const json& object, const char* block, const char* key) {
  if (!object.contains(key)) {
    throw ConfigError(std::string(block) + " block requires '" + key + "'");
  }
  if (!object[key].is_number()) {
    throw ConfigError(std::string("'") + key + "' in " + block + " must be a number");
  }
  return object[key].get<double>();
}

int int_field(const json& object, const char* block, const char* key) {
  if (!object.contains(key) || !object[key].is_number_integer()) {
    throw ConfigError(std::string(block) + " block requires integer '" + key + "'");
  }
  return object[key].get<int>();
}

void require_block(const RunConfig& cfg, bool present, const char* block) {
  if (!present) {
    throw ConfigError(std::string("mode '") + mode_name(cfg.mode) + "' requires the " +
                      block + " block");
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoFailure("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoFailure("write to '" + path + "' failed");
  }
}

std::string csv_header_comment(const RunConfig& cfg) {
  std::ostringstream meta;
  meta << "# cavityflip " << kVersion << " mode=" << mode_name(cfg.mode) << "\n";
  if (cfg.canonical) {
    meta << "# Gamma=" << format_double(cfg.canonical->Gamma)
         << " beta=" << format_double(cfg.canonical->beta) << "\n";
  }
  if (cfg.raw) {
    meta << "# g=" << format_double(cfg.raw->g) << " kappa=" << format_double(cfg.raw->kappa)
         << " gamma=" << format_double(cfg.raw->gamma) << "\n";
  }
  return meta.str();
}

json run_metadata(const RunConfig& cfg) {
  json meta;
  meta["version"] = kVersion;
  meta["mode"] = mode_name(cfg.mode);
  if (cfg.canonical) {
    meta["Gamma"] = cfg.canonical->Gamma;
    meta["beta"] = cfg.canonical->beta;
  }
  if (cfg.raw) {
    meta["g"] = cfg.raw->g;
    meta["kappa"] = cfg.raw->kappa;
    meta["gamma"] = cfg.raw->gamma;
  }
  return meta;
}

// Rows as column-name/value pairs shared by the CSV and JSON writers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(const RunConfig& cfg, const Table& table) {
  auto out = open_output(cfg.out_path);
  if (cfg.format == OutputFormat::Csv) {
    out << csv_header_comment(cfg);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << format_double(row[c]);
      }
      out << "\n";
    }
  } else {
    json doc;
    doc["metadata"] = run_metadata(cfg);
    json rows = json::array();
    for (const auto& row : table.rows) {
      json entry;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (std::isfinite(row[c])) {
          entry[table.columns[c]] = row[c];
        } else {
          entry[table.columns[c]] = nullptr;  // JSON has no NaN
        }
      }
      rows.push_back(entry);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << "\n";
  }
  finish_output(out, cfg.out_path);
}

DriveCondition drive_from(const RunConfig& cfg) {
  return DriveCondition(std::sqrt(*cfg.flux), *cfg.omega);
}

void run_steady(const RunConfig& cfg) {
  const AtomCavityParams p = cfg.params();
  const DriveCondition d = drive_from(cfg);
  const BlochState s = steady_state(p, d);

  double phase = std::numeric_limits<double>::quiet_NaN();
  double reflectivity = std::numeric_limits<double>::quiet_NaN();
  Complex b_out(0.0, 0.0);
  if (d.flux() > 0.0) {
    const ReflectionResponse r = output_amplitude(p, d);
    phase = r.phase_deg;
    reflectivity = r.reflectivity;
    b_out = r.b_out;
  }

  Table table;
  table.columns = {"omega",    "flux",     "re_sigma_minus", "im_sigma_minus", "sigma_z",
                   "re_b_out", "im_b_out", "phase_deg",      "reflectivity"};
  table.rows = {{d.omega, d.flux(), s.sigma_minus.real(), s.sigma_minus.imag(), s.sigma_z,
                 b_out.real(), b_out.imag(), phase, reflectivity}};
  write_table(cfg, table);

  std::printf("steady: sigma_z=%.6g |sigma_minus|=%.6g phase=%.6g deg reflectivity=%.6g\n",
              s.sigma_z, std::abs(s.sigma_minus), phase, reflectivity);
}

void run_phase_spectrum(const RunConfig& cfg) {
  const AtomCavityParams p = cfg.params();
  const RunConfig::Grid& g = *cfg.grid;
  std::vector<double> grid(static_cast<std::size_t>(g.points));
  for (int i = 0; i < g.points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        g.start + (g.stop - g.start) * i / (g.points - 1);
  }
  const SpectrumResult spectrum = phase_spectrum(p.beta, grid);

  Table table;
  table.columns = {"omega_over_gamma", "phase_deg", "reflectivity"};
  double max_phase = 0.0;
  double max_at = grid.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows.push_back(
        {spectrum.omega_over_Gamma[i], spectrum.phase_deg[i], spectrum.reflectivity[i]});
    if (!spectrum.degenerate[i] && spectrum.phase_deg[i] > max_phase) {
      max_phase = spectrum.phase_deg[i];
      max_at = spectrum.omega_over_Gamma[i];
    }
  }
  write_table(cfg, table);

  std::printf("phase-spectrum: beta=%.6g points=%d max_phase=%.6g deg at omega/Gamma=%.6g\n",
              p.beta, g.points, max_phase, max_at);
}

void run_intensity_sweep(const RunConfig& cfg) {
  const AtomCavityParams p = cfg.params();
  const RunConfig::FluxDecades& fd = *cfg.flux_decades;
  const auto points = intensity_transition(p, *cfg.omega, fd.lo, fd.hi, fd.points);

  Table table;
  table.columns = {"flux", "phase_deg", "reflectivity"};
  for (const IntensityPoint& pt : points) {
    table.rows.push_back({pt.flux, pt.phase_deg, pt.reflectivity});
  }
  write_table(cfg, table);

  std::printf("intensity-sweep: beta=%.6g omega=%.6g reflectivity %.6g -> %.6g over %d points\n",
              p.beta, *cfg.omega, points.front().reflectivity, points.back().reflectivity,
              fd.points);
}

IntegratorConfig integrator_from(const RunConfig& cfg, const AtomCavityParams& p) {
  IntegratorConfig ic = default_integrator(p, *cfg.omega, *cfg.flux);
  if (cfg.integrator.dt) ic.dt = *cfg.integrator.dt;
  if (cfg.integrator.t_max) ic.t_max = *cfg.integrator.t_max;
  if (cfg.integrator.convergence_tol) ic.convergence_tol = *cfg.integrator.convergence_tol;
  if (cfg.integrator.record_stride) ic.record_stride = *cfg.integrator.record_stride;
  return ic;
}

void run_dynamics(const RunConfig& cfg) {
  const AtomCavityParams p = cfg.params();
  const DriveCondition d = drive_from(cfg);
  const IntegratorConfig ic = integrator_from(cfg, p);
  const BlochTrajectory traj = integrate(ground_state(), p, DriveEnvelope::cw(d), ic);

  Table table;
  table.columns = {"t", "re_sigma_minus", "im_sigma_minus", "sigma_z", "re_b_out", "im_b_out"};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    table.rows.push_back({traj.times[i], traj.states[i].sigma_minus.real(),
                          traj.states[i].sigma_minus.imag(), traj.states[i].sigma_z,
                          traj.b_out[i].real(), traj.b_out[i].imag()});
  }
  write_table(cfg, table);

  const BlochState& last = traj.states.back();
  const double residual = derivative(last, p, d.amplitude, d.omega).norm();
  std::printf("dynamics: %zu samples to t=%.6g, final sigma_z=%.6g residual=%.3g\n",
              traj.times.size(), traj.times.back(), last.sigma_z, residual);
}

void run_max_phase(const RunConfig& cfg) {
  const AtomCavityParams p = cfg.params();
  const MaxPhaseResult r = find_max_phase(p.beta);

  Table table;
  table.columns = {"beta", "omega_star_over_gamma", "phase_star_deg", "iterations",
                   "open_supremum"};
  table.rows = {{r.beta, r.omega_star_over_Gamma, r.phase_star_deg,
                 static_cast<double>(r.iterations), r.open_supremum ? 1.0 : 0.0}};
  write_table(cfg, table);

  std::printf("max-phase: phase*=%.4g deg at omega*=%.4g%s (beta=%.6g)\n", r.phase_star_deg,
              r.omega_star_over_Gamma, r.open_supremum ? " (open supremum)" : "", r.beta);
}

void run_verify_oracle(const RunConfig& cfg) {
  const FullModel model(*cfg.raw, drive_from(cfg), cfg.truncation);
  const OracleReport report = verify_oracle(model);

  json doc;
  doc["metadata"] = run_metadata(cfg);
  doc["parameters"] = {{"g", report.raw.g},
                       {"kappa", report.raw.kappa},
                       {"gamma", report.raw.gamma},
                       {"Gamma", report.canonical.Gamma},
                       {"beta", report.canonical.beta},
                       {"omega", *cfg.omega},
                       {"flux", *cfg.flux}};
  doc["truncation"] = report.truncation;
  doc["residual"] = report.residual;
  doc["method"] = report.method;
  doc["elimination_error"] = report.elimination_error;
  doc["expectations"] = {{"re_a", report.full.a.real()},
                         {"im_a", report.full.a.imag()},
                         {"re_sigma_minus", report.full.sigma_minus.real()},
                         {"im_sigma_minus", report.full.sigma_minus.imag()},
                         {"sigma_z", report.full.sigma_z}};
  doc["b_out_full"] = {{"re", report.b_out_full.real()}, {"im", report.b_out_full.imag()}};
  doc["b_out_eliminated_form"] = {{"re", report.b_out_eliminated_form.real()},
                                  {"im", report.b_out_eliminated_form.imag()}};
  doc["b_out_eliminated"] = {{"re", report.b_out_eliminated.real()},
                             {"im", report.b_out_eliminated.imag()}};

  auto out = open_output(cfg.out_path);
  out << doc.dump(2) << "\n";
  finish_output(out, cfg.out_path);

  std::printf("verify-oracle: elimination_error=%.3g residual=%.3g N=%d method=%s\n",
              report.elimination_error, report.residual, report.truncation,
              report.method.c_str());
}

}  // namespace

const char* mode_name(RunMode mode) { return kModeNames[static_cast<int>(mode)]; }

AtomCavityParams RunConfig::params() const {
  if (canonical) return *canonical;
  if (raw) return derive(*raw);
  throw ConfigError("no parameter block present");
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  reject_unknown_keys(doc, "config", {"mode", "raw", "canonical", "drive", "grid",
                                      "flux_decades", "integrator", "oracle", "output"});

  RunConfig cfg;
  if (!doc.contains("mode") || !doc["mode"].is_string()) {
    throw ConfigError("config requires a string 'mode'");
  }
  cfg.mode = mode_from_string(doc["mode"].get<std::string>());

  if (doc.contains("raw") && doc.contains("canonical")) {
    throw ConfigError("exactly one parameter block allowed: raw or canonical");
  }
  try {
    if (doc.contains("raw")) {
      const json& block = doc["raw"];
      reject_unknown_keys(block, "raw", {"g", "kappa", "gamma"});
      cfg.raw = RawCavityParams(number_field(block, "raw", "g"),
                                number_field(block, "raw", "kappa"),
                                number_field(block, "raw", "gamma"));
    }
    if (doc.contains("canonical")) {
      const json& block = doc["canonical"];
      reject_unknown_keys(block, "canonical", {"Gamma", "beta"});
      cfg.canonical = AtomCavityParams(number_field(block, "canonical", "Gamma"),
                                       number_field(block, "canonical", "beta"));
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("invalid parameter block: ") + e.what());
  }

  if (doc.contains("drive")) {
    const json& block = doc["drive"];
    reject_unknown_keys(block, "drive", {"omega", "flux"});
    cfg.omega = number_field(block, "drive", "omega");
    if (block.contains("flux")) {
      const double flux = number_field(block, "drive", "flux");
      if (!(flux >= 0.0) || !std::isfinite(flux)) {
        throw ConfigError("drive flux must be finite and >= 0");
      }
      cfg.flux = flux;
    }
  }

  if (doc.contains("grid")) {
    const json& block = doc["grid"];
    reject_unknown_keys(block, "grid", {"start", "stop", "points"});
    RunConfig::Grid g;
    g.start = number_field(block, "grid", "start");
    g.stop = number_field(block, "grid", "stop");
    g.points = int_field(block, "grid", "points");
    if (!(g.start < g.stop) || g.points < 2) {
      throw ConfigError("grid requires start < stop and points >= 2");
    }
    cfg.grid = g;
  }

  if (doc.contains("flux_decades")) {
    const json& block = doc["flux_decades"];
    reject_unknown_keys(block, "flux_decades", {"lo", "hi", "points"});
    RunConfig::FluxDecades fd;
    fd.lo = number_field(block, "flux_decades", "lo");
    fd.hi = number_field(block, "flux_decades", "hi");
    fd.points = int_field(block, "flux_decades", "points");
    if (!(fd.lo < fd.hi) || fd.points < 2) {
      throw ConfigError("flux_decades requires lo < hi and points >= 2");
    }
    cfg.flux_decades = fd;
  }

  if (doc.contains("integrator")) {
    const json& block = doc["integrator"];
    reject_unknown_keys(block, "integrator",
                        {"dt", "t_max", "convergence_tol", "record_stride"});
    if (block.contains("dt")) cfg.integrator.dt = number_field(block, "integrator", "dt");
    if (block.contains("t_max")) {
      cfg.integrator.t_max = number_field(block, "integrator", "t_max");
    }
    if (block.contains("convergence_tol")) {
      cfg.integrator.convergence_tol = number_field(block, "integrator", "convergence_tol");
    }
    if (block.contains("record_stride")) {
      cfg.integrator.record_stride = int_field(block, "integrator", "record_stride");
    }
  }

  if (doc.contains("oracle")) {
    const json& block = doc["oracle"];
    reject_unknown_keys(block, "oracle", {"truncation"});
    cfg.truncation = int_field(block, "oracle", "truncation");
    if (cfg.truncation < 1) {
      throw ConfigError("oracle truncation must be >= 1");
    }
  }

  if (doc.contains("output")) {
    const json& block = doc["output"];
    reject_unknown_keys(block, "output", {"path", "format"});
    if (block.contains("path")) {
      if (!block["path"].is_string()) throw ConfigError("output path must be a string");
      cfg.out_path = block["path"].get<std::string>();
    }
    if (block.contains("format")) {
      if (!block["format"].is_string()) throw ConfigError("output format must be a string");
      const std::string fmt = block["format"].get<std::string>();
      if (fmt == "csv") {
        cfg.format = OutputFormat::Csv;
      } else if (fmt == "json") {
        cfg.format = OutputFormat::Json;
      } else {
        throw ConfigError("output format must be 'csv' or 'json'");
      }
    }
  }

  // Mode requirements.
  const bool has_params = cfg.raw.has_value() || cfg.canonical.has_value();
  require_block(cfg, has_params, "parameter (raw or canonical)");
  switch (cfg.mode) {
    case RunMode::Steady:
    case RunMode::Dynamics:
      require_block(cfg, cfg.omega.has_value(), "drive");
      require_block(cfg, cfg.flux.has_value(), "drive flux");
      break;
    case RunMode::PhaseSpectrum:
      require_block(cfg, cfg.grid.has_value(), "grid");
      break;
    case RunMode::IntensitySweep:
      require_block(cfg, cfg.omega.has_value(), "drive");
      require_block(cfg, cfg.flux_decades.has_value(), "flux_decades");
      break;
    case RunMode::MaxPhase:
      break;
    case RunMode::VerifyOracle:
      if (!cfg.raw) {
        throw ConfigError("mode 'verify-oracle' requires the raw parameter block");
      }
      require_block(cfg, cfg.omega.has_value(), "drive");
      require_block(cfg, cfg.flux.has_value(), "drive flux");
      break;
  }

  if (cfg.out_path.empty()) {
    const bool json_mode = cfg.format == OutputFormat::Json || cfg.mode == RunMode::VerifyOracle;
    cfg.out_path = std::string(mode_name(cfg.mode)) + (json_mode ? ".json" : ".csv");
  }
  return cfg;
}

void run(const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::Steady: return run_steady(cfg);
    case RunMode::PhaseSpectrum: return run_phase_spectrum(cfg);
    case RunMode::IntensitySweep: return run_intensity_sweep(cfg);
    case RunMode::Dynamics: return run_dynamics(cfg);
    case RunMode::MaxPhase: return run_max_phase(cfg);
    case RunMode::VerifyOracle: return run_verify_oracle(cfg);
  }
}

int execute(const RunConfig& cfg) {
  try {
    run(cfg);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ZeroInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateResponse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const StepInstability& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const TruncationTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SingularSolve& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace cavityflip
