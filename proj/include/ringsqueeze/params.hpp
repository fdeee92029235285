#pragma once

// Physical parameters of the dual-pumped resonator and the quantities derived
// from them. Everything is SI; angular frequencies are in rad/s.

#include <optional>
#include <string>

namespace ringsqueeze {

struct ResonatorSpec {
  double round_trip_length = 0.0;            // m
  std::optional<double> group_velocity;      // m/s
  std::optional<double> group_index;         // v_g = c / n_g
  double gamma_nl = 0.0;                     // 1/(W m)
  std::optional<double> effective_index;     // noise budget only
  std::optional<double> ring_radius;         // m, noise budget only

  /// Resolved group velocity. Throws when neither form is given or the two
  /// disagree.
  double v_g() const;
  /// Resolved group index, c / v_g when only the velocity is given.
  double n_g() const;
  void validate() const;
};

enum class ModeLabel { kDrive, kSignal, kPump };

std::string to_string(ModeLabel label);

struct ModeSpec {
  ModeLabel label = ModeLabel::kSignal;
  double omega = 0.0;                        // rad/s
  double q_intrinsic = 0.0;
  double escape_efficiency = 0.0;            // (0, 1]
  /// Required only when escape_efficiency == 1 (no intrinsic loss channel).
  std::optional<double> q_loaded;

  void validate() const;
};

/// Decay rates of one loaded resonance. gamma_total = gamma_coupling +
/// m_scattering; all rates are amplitude decay rates.
struct DerivedRates {
  double gamma_coupling = 0.0;   // Γ, into the bus waveguide
  double m_scattering = 0.0;     // M, into scattering modes
  double gamma_total = 0.0;      // Γ̄
  double q_loaded = 0.0;
  double dwell_time = 0.0;       // 1/Γ̄

  double escape_efficiency() const { return gamma_coupling / gamma_total; }
};

struct PhaseMatchReport {
  double delta_res = 0.0;
  double delta_spm = 0.0;
  double delta_xpm = 0.0;
  double delta_net = 0.0;
};

/// Pair-generation coupling Λ = ħ ω_S v_g² γ_NL / (2L), in rad/s per photon.
double nonlinear_coupling(const ResonatorSpec& resonator, double omega_s);

DerivedRates derive_rates(const ModeSpec& mode);

/// Intraresonator amplitude of a resonant CW drive,
/// β̄_D = 2 sqrt(P_D Q_D η_D / (ħ ω_D²)).
double drive_amplitude(double power, const ModeSpec& drive_mode, const DerivedRates& drive_rates);

/// Drive power that cancels a normal-dispersion mismatch delta_res through
/// the SPM/XPM imbalance. Inverse of drive_amplitude composed with Λβ̄_D².
double phase_match_power(double delta_res, double coupling, const ModeSpec& drive_mode,
                         const DerivedRates& drive_rates);

PhaseMatchReport spm_xpm_report(double beta_d, double coupling, double delta_res);

}  // namespace ringsqueeze
