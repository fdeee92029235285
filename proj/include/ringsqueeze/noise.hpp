#pragma once

// Spurious spontaneous four-wave mixing driven by the CW drive: the
// SPM/XPM-induced detuning of the unwanted process, the resulting pair
// suppression and the signal-to-noise ratio.

#include <string>

#include "ringsqueeze/params.hpp"

namespace ringsqueeze {

struct NoiseReport {
  double delta = 0.0;          // δ (rad/s)
  double linewidth = 0.0;      // Δ = ω/Q (rad/s)
  double suppression = 1.0;    // Δ² / (δ² + Δ²)
  double snr = 0.0;            // from δ and Δ
  double snr_structural = 0.0; // from ξ, Q and R
  double xi = 0.0;             // ξ (m/W)
  /// Bragg-scattering FWM acts as extra loss on the signal and is not modeled.
  bool bragg_scattering_modeled = false;
};

/// δ = -(3c / (ω_D n_eff)) γ_NL (v_g Q / (2πR)) P_D.
double spurious_detuning(const ResonatorSpec& resonator, double omega_d, double q_loaded, double drive_power);

/// Δ² / (δ² + Δ²).
double suppression_factor(double delta, double linewidth);

/// (P_P / P_D)(1 + δ²/Δ²).
double snr(double pump_power, double drive_power, double delta, double linewidth);

/// ξ = 3c² γ_NL / (2π ω² n_eff n_g).
double xi_parameter(const ResonatorSpec& resonator, double omega);

/// (P_P / P_D)(1 + ξ² Q⁴ P_D² / R²).
double snr_structural(double pump_power, double drive_power, double xi, double q_loaded, double ring_radius);

/// Full budget from device parameters, with Δ = ω_D / Q.
NoiseReport noise_budget(const ResonatorSpec& resonator, double omega_d, double q_loaded, double drive_power,
                         double pump_power);

/// Budget from a given ξ: δ follows from |δ|/Δ = ξ Q² P_D / R with Δ = ω_D / Q.
NoiseReport noise_budget_from_xi(double xi, double omega_d, double q_loaded, double ring_radius,
                                 double drive_power, double pump_power);

}  // namespace ringsqueeze
