#pragma once

// JSON run configuration. Keys carry their units; unknown keys are rejected.
// Parsing also produces the resolved document (input plus every default that
// was applied), which output files embed so a run can be repeated exactly.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ringsqueeze/constants.hpp"
#include "ringsqueeze/params.hpp"

namespace ringsqueeze {

inline constexpr const char* kConfigFormat = "ringsqueeze-config/1";

enum class DwellConvention {
  kInverseTotal,       // 1/Γ̄
  kHalfInverseTotal,   // 1/(2Γ̄)
};

struct DriveSettings {
  std::optional<double> power;         // W
  bool auto_phase_match = false;       // choose P_D so that Δ_net = 0
  std::optional<double> delta_net;     // rad/s
  std::optional<double> delta_res;     // rad/s
};

enum class PulseShape { kGaussian, kSamples };

struct PulseSettings {
  PulseShape shape = PulseShape::kGaussian;
  std::vector<double> energies;        // J, ascending
  std::optional<double> fwhm;          // s
  double fwhm_relative = 0.1;          // of the signal dwell time, when fwhm is absent
  double center = 0.0;                 // s
  DwellConvention dwell = DwellConvention::kInverseTotal;
  // Raw α_in samples (√(photons/m)) for PulseShape::kSamples.
  std::vector<cplx> samples;
  double sample_start = 0.0;           // s
  double sample_step = 0.0;            // s
};

struct GridSettings {
  bool automatic = true;
  double start = 0.0;                  // s
  double end = 0.0;                    // s
  std::size_t points = 0;
  bool allow_large = false;
};

struct SolverSettings {
  double pump_tolerance = 1e-6;
  double su11_tolerance = 1e-6;
  std::size_t mode_count = 10;
  bool takagi_check = false;
};

struct NoiseSettings {
  double pump_power = 1e-3;            // W
  std::optional<double> q_loaded;      // overrides the selected mode's loaded Q
  std::optional<double> xi;            // m/W, overrides the value from the geometry
  ModeLabel linewidth_mode = ModeLabel::kSignal;
};

struct OutputSettings {
  bool dump_green = false;
  bool dump_kernels = false;
};

struct RunConfig {
  ResonatorSpec resonator;
  ModeSpec drive_mode;
  ModeSpec signal_mode;
  ModeSpec pump_mode;
  DriveSettings drive;
  PulseSettings pulse;
  GridSettings grid;
  SolverSettings solver;
  NoiseSettings noise;
  OutputSettings output;
  nlohmann::json resolved;             // input with defaults filled in
};

/// Validates and resolves a configuration document. Throws Error(kConfig).
RunConfig parse_config(const nlohmann::json& document);

RunConfig load_config(const std::filesystem::path& path);

/// Reads a JSON file; syntax errors become Error(kConfig).
nlohmann::json read_json(const std::filesystem::path& path);

/// Replaces the pulse energy entries of a document with `energies_pj`.
nlohmann::json with_energies(nlohmann::json document, const std::vector<double>& energies_pj);

/// "1,2.5,10" or "log:min,max,n" (pJ).
std::vector<double> parse_energy_list(const std::string& text);

}  // namespace ringsqueeze
