#pragma once

// End-to-end runs: parameters -> pump -> Green function -> moments -> modes.

#include <optional>
#include <string>
#include <vector>

#include "ringsqueeze/config.hpp"
#include "ringsqueeze/error.hpp"
#include "ringsqueeze/green.hpp"
#include "ringsqueeze/moments.hpp"
#include "ringsqueeze/modes.hpp"
#include "ringsqueeze/noise.hpp"
#include "ringsqueeze/params.hpp"
#include "ringsqueeze/pump.hpp"

namespace ringsqueeze {

/// Everything derived from the configuration before any time stepping.
struct Device {
  DerivedRates drive_rates;
  DerivedRates signal_rates;
  DerivedRates pump_rates;
  double coupling = 0.0;          // Λ
  double drive_power = 0.0;       // P_D (W)
  double beta_d = 0.0;            // β̄_D
  PhaseMatchReport phase;
  double dwell_time = 0.0;        // signal dwell time under the chosen convention
  double pulse_fwhm = 0.0;        // s
};

Device resolve_device(const RunConfig& config);

/// Auto rule: [center - 5 fwhm, center + 8/Γ̄_S] with the smallest power of
/// two (>= 16) points giving dt <= min(fwhm/20, 1/(20 Γ̄_P)).
TimeGrid auto_grid(double center, double fwhm, double gamma_total_s, double gamma_total_p);

/// The configured grid; explicit grids must start >= 5 fwhm before the pulse
/// center and respect the kernel size cap.
TimeGrid resolve_grid(const RunConfig& config, const Device& device);

/// Pairing of the Schmidt and Takagi decompositions (meaningful when η = 1,
/// or after dividing by η).
struct PurityCheck {
  double threshold = 0.0;             // modes with n_λ > threshold · n₀ are checked
  std::size_t modes_above = 0;
  std::size_t modes_checked = 0;      // limited by the modes carried in the decomposition
  double max_pairing_error = 0.0;     // max |m'/sqrt(n'(n'+1)) - 1|, n' = n/η, m' = m_takagi/η
  double min_profile_fidelity = 1.0;  // Schmidt vs Takagi profile
};

/// Compares the Schmidt modes of `modes` with the leading Takagi pairs.
PurityCheck purity_check(const MomentKernels& kernels, const ModeDecomposition& modes, double threshold = 1e-6);

/// Modes carried by the decomposition when the purity check is enabled.
inline constexpr std::size_t kPurityModes = 40;

struct RunResult {
  double energy = 0.0;                // J
  TimeGrid grid;
  double pump_step_error = 0.0;
  double su11_drift = 0.0;
  double trace_photons = 0.0;         // ∫N(t,t)dt
  ModeDecomposition modes;
  bool vacuum = false;                // no photons: K undefined
  QuadratureVariances variances;
  ThermalEquivalents thermal;
  ProfileWidth width;
  std::optional<PurityCheck> purity;
  // Kept only when the configuration asks for dumps.
  std::optional<GreenTable> green;
  std::optional<MomentKernels> kernels;
};

RunResult run_single(const RunConfig& config, const Device& device, const TimeGrid& grid, double energy);

struct SweepResult {
  std::vector<RunResult> runs;        // energy order; may stop early
  std::vector<std::optional<double>> fidelity;  // vs the lowest energy
  bool complete = true;
  std::optional<Error> failure;
  double failed_energy = 0.0;
};

/// One worker per energy (up to the hardware concurrency); results are
/// merged in energy order. A failing point stops the sweep: the runs before
/// it are kept and the failure is recorded.
SweepResult run_sweep(const RunConfig& config, const Device& device, const TimeGrid& grid);

NoiseReport noise_report(const RunConfig& config, const Device& device);

}  // namespace ringsqueeze
