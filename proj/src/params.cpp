#include "ringsqueeze/params.hpp"

#include <cmath>

#include "ringsqueeze/constants.hpp"
#include "ringsqueeze/error.hpp"

namespace ringsqueeze {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw invalid_parameter(std::string(name) + " must be finite and > 0 (got " +
                            std::to_string(value) + ")");
  }
}

}  // namespace

double ResonatorSpec::v_g() const {
  if (group_velocity && group_index) {
    const double from_index = constants::c / *group_index;
    if (std::abs(from_index - *group_velocity) > 1e-9 * std::abs(*group_velocity)) {
      throw invalid_parameter("group_velocity and group_index disagree");
    }
    return *group_velocity;
  }
  if (group_velocity) return *group_velocity;
  if (group_index) return constants::c / *group_index;
  throw invalid_parameter("resonator needs group_velocity or group_index");
}

double ResonatorSpec::n_g() const {
  if (group_index) return *group_index;
  return constants::c / v_g();
}

void ResonatorSpec::validate() const {
  require_positive(round_trip_length, "round_trip_length");
  if (group_velocity) require_positive(*group_velocity, "group_velocity");
  if (group_index) require_positive(*group_index, "group_index");
  require_positive(v_g(), "group_velocity");
  if (!(gamma_nl >= 0.0) || !std::isfinite(gamma_nl)) {
    throw invalid_parameter("gamma_nl must be finite and >= 0");
  }
  if (effective_index) require_positive(*effective_index, "effective_index");
  if (ring_radius) require_positive(*ring_radius, "ring_radius");
}

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::kDrive: return "drive";
    case ModeLabel::kSignal: return "signal";
    case ModeLabel::kPump: return "pump";
  }
  return "unknown";
}

void ModeSpec::validate() const {
  const std::string who = to_string(label) + " mode ";
  if (!(omega > 0.0) || !std::isfinite(omega)) throw invalid_parameter(who + "omega must be > 0");
  if (!(q_intrinsic > 0.0) || !std::isfinite(q_intrinsic)) {
    throw invalid_parameter(who + "q_intrinsic must be > 0");
  }
  if (!(escape_efficiency > 0.0 && escape_efficiency <= 1.0)) {
    throw invalid_parameter(who + "escape_efficiency must lie in (0, 1]");
  }
  if (q_loaded && !(*q_loaded > 0.0)) throw invalid_parameter(who + "q_loaded must be > 0");
}

double nonlinear_coupling(const ResonatorSpec& resonator, double omega_s) {
  resonator.validate();
  require_positive(omega_s, "omega_s");
  const double vg = resonator.v_g();
  return constants::hbar * omega_s * vg * vg * resonator.gamma_nl / (2.0 * resonator.round_trip_length);
}

DerivedRates derive_rates(const ModeSpec& mode) {
  mode.validate();
  DerivedRates r;
  const double eta = mode.escape_efficiency;
  if (eta == 1.0) {
    if (!mode.q_loaded) {
      throw Error(ErrorKind::kConfig, "under-determined",
                  to_string(mode.label) +
                      " mode: escape_efficiency = 1 leaves the loaded Q undetermined; give q_loaded");
    }
    r.m_scattering = 0.0;
    r.gamma_total = mode.omega / (2.0 * *mode.q_loaded);
    r.gamma_coupling = r.gamma_total;
  } else {
    r.m_scattering = mode.omega / (2.0 * mode.q_intrinsic);
    r.gamma_total = r.m_scattering / (1.0 - eta);
    r.gamma_coupling = r.gamma_total - r.m_scattering;
    if (mode.q_loaded && std::abs(mode.omega / (2.0 * r.gamma_total) / *mode.q_loaded - 1.0) > 1e-9) {
      throw invalid_parameter(to_string(mode.label) + " mode: q_loaded contradicts q_intrinsic and escape_efficiency");
    }
  }
  r.q_loaded = mode.omega / (2.0 * r.gamma_total);
  r.dwell_time = 1.0 / r.gamma_total;
  return r;
}

double drive_amplitude(double power, const ModeSpec& drive_mode, const DerivedRates& drive_rates) {
  if (!(power >= 0.0) || !std::isfinite(power)) throw invalid_parameter("drive power must be >= 0");
  drive_mode.validate();
  const double w = drive_mode.omega;
  return 2.0 * std::sqrt(power * drive_rates.q_loaded * drive_rates.escape_efficiency() /
                         (constants::hbar * w * w));
}

double phase_match_power(double delta_res, double coupling, const ModeSpec& drive_mode,
                         const DerivedRates& drive_rates) {
  if (delta_res == 0.0) return 0.0;
  if (!(delta_res > 0.0)) {
    throw Error(ErrorKind::kConfig, "no-solution",
                "phase matching by SPM/XPM needs normal dispersion (delta_res > 0)");
  }
  require_positive(coupling, "nonlinear coupling");
  drive_mode.validate();
  const double w = drive_mode.omega;
  return delta_res * constants::hbar * w * w /
         (4.0 * coupling * drive_rates.q_loaded * drive_rates.escape_efficiency());
}

PhaseMatchReport spm_xpm_report(double beta_d, double coupling, double delta_res) {
  PhaseMatchReport rep;
  rep.delta_res = delta_res;
  rep.delta_spm = coupling * beta_d * beta_d;
  rep.delta_xpm = 2.0 * rep.delta_spm;
  rep.delta_net = delta_res - rep.delta_spm;
  return rep;
}

}  // namespace ringsqueeze
