#include "ringsqueeze/noise.hpp"

#include <cmath>

#include "ringsqueeze/constants.hpp"
#include "ringsqueeze/error.hpp"

namespace ringsqueeze {

namespace {

void require_geometry(const ResonatorSpec& resonator) {
  if (!resonator.effective_index || !resonator.ring_radius) {
    throw Error(ErrorKind::kConfig, "configuration",
                "noise budget needs resonator effective_index and ring_radius");
  }
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw invalid_parameter(std::string(what) + " must be > 0");
}

}  // namespace

double spurious_detuning(const ResonatorSpec& resonator, double omega_d, double q_loaded, double drive_power) {
  require_geometry(resonator);
  resonator.validate();
  require_positive(omega_d, "omega_d");
  require_positive(q_loaded, "q_loaded");
  if (!(drive_power >= 0.0)) throw invalid_parameter("drive power must be >= 0");
  return -(3.0 * constants::c / (omega_d * *resonator.effective_index)) * resonator.gamma_nl *
         (resonator.v_g() * q_loaded / (constants::two_pi * *resonator.ring_radius)) * drive_power;
}

double suppression_factor(double delta, double linewidth) {
  require_positive(linewidth, "linewidth");
  const double l2 = linewidth * linewidth;
  return l2 / (delta * delta + l2);
}

double snr(double pump_power, double drive_power, double delta, double linewidth) {
  require_positive(pump_power, "pump power");
  require_positive(drive_power, "drive power");
  require_positive(linewidth, "linewidth");
  const double x = delta / linewidth;
  return pump_power / drive_power * (1.0 + x * x);
}

double xi_parameter(const ResonatorSpec& resonator, double omega) {
  require_geometry(resonator);
  resonator.validate();
  require_positive(omega, "omega");
  const double c2 = constants::c * constants::c;
  return 3.0 * c2 * resonator.gamma_nl / (constants::two_pi * omega * omega * *resonator.effective_index * resonator.n_g());
}

double snr_structural(double pump_power, double drive_power, double xi, double q_loaded, double ring_radius) {
  require_positive(pump_power, "pump power");
  require_positive(drive_power, "drive power");
  require_positive(q_loaded, "q_loaded");
  require_positive(ring_radius, "ring radius");
  const double x = xi * q_loaded * q_loaded * drive_power / ring_radius;
  return pump_power / drive_power * (1.0 + x * x);
}

NoiseReport noise_budget(const ResonatorSpec& resonator, double omega_d, double q_loaded, double drive_power,
                         double pump_power) {
  NoiseReport r;
  r.delta = spurious_detuning(resonator, omega_d, q_loaded, drive_power);
  r.linewidth = omega_d / q_loaded;
  r.suppression = suppression_factor(r.delta, r.linewidth);
  r.xi = xi_parameter(resonator, omega_d);
  r.snr = snr(pump_power, drive_power, r.delta, r.linewidth);
  r.snr_structural = snr_structural(pump_power, drive_power, r.xi, q_loaded, *resonator.ring_radius);
  return r;
}

NoiseReport noise_budget_from_xi(double xi, double omega_d, double q_loaded, double ring_radius,
                                 double drive_power, double pump_power) {
  require_positive(xi, "xi");
  require_positive(omega_d, "omega_d");
  require_positive(q_loaded, "q_loaded");
  require_positive(ring_radius, "ring radius");
  NoiseReport r;
  r.xi = xi;
  r.linewidth = omega_d / q_loaded;
  r.delta = -xi * q_loaded * drive_power * omega_d / ring_radius;
  r.suppression = suppression_factor(r.delta, r.linewidth);
  r.snr = snr(pump_power, drive_power, r.delta, r.linewidth);
  r.snr_structural = snr_structural(pump_power, drive_power, xi, q_loaded, ring_radius);
  return r;
}

}  // namespace ringsqueeze
