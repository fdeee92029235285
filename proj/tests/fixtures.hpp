#pragma once

// Reference device shared by the tests: 400 µm ring at 193 THz, Q_int = 2e6,
// escape efficiencies 0.5 (drive), 0.9 (signal), 0.98 (pump), 200 mW drive.

#include <cmath>
#include <optional>

#include "ringsqueeze/green.hpp"
#include "ringsqueeze/moments.hpp"
#include "ringsqueeze/params.hpp"
#include "ringsqueeze/pump.hpp"

namespace fixtures {

using namespace ringsqueeze;

inline const double kOmega = 2.0 * M_PI * 193e12;

inline ResonatorSpec resonator() {
  ResonatorSpec r;
  r.round_trip_length = 400e-6;
  r.group_index = 1.7;
  r.gamma_nl = 1.0;
  return r;
}

struct Device {
  ResonatorSpec res = resonator();
  ModeSpec drive{ModeLabel::kDrive, kOmega, 2e6, 0.5, std::nullopt};
  ModeSpec signal{ModeLabel::kSignal, kOmega, 2e6, 0.9, std::nullopt};
  ModeSpec pump{ModeLabel::kPump, kOmega, 2e6, 0.98, std::nullopt};
  double drive_power = 0.2;
  double delta_net = 0.0;
  double fwhm_relative = 0.1;

  DerivedRates signal_rates() const { return derive_rates(signal); }
  double coupling() const { return nonlinear_coupling(res, kOmega); }
  double fwhm() const { return fwhm_relative * signal_rates().dwell_time; }

  TimeGrid grid(std::size_t n, double dwell_after = 8.0) const {
    return TimeGrid(-5.0 * fwhm(), dwell_after * signal_rates().dwell_time, n);
  }

  CouplingMatrixSeries series(double energy, const TimeGrid& grid) const {
    const double lambda = coupling();
    const DerivedRates rd = derive_rates(drive);
    const auto alpha = gaussian_pulse(energy, fwhm(), 0.0, grid, kOmega, res.v_g());
    PumpIntegrationOptions o;
    o.tolerance = 1.0;
    PumpSolution p = integrate_pump(alpha, derive_rates(pump), lambda, res.v_g(), grid, o);
    effective_pump(p, drive_amplitude(drive_power, drive, rd), lambda);
    return coupling_matrix(p, delta_net, lambda, signal_rates().gamma_total);
  }

  MomentKernels kernels(double energy, const TimeGrid& grid) const {
    const DerivedRates s = signal_rates();
    return output_moments(solve_green(series(energy, grid)), s.gamma_coupling, s.gamma_total);
  }
};

/// Lossless signal mode with the same total damping as the reference device.
inline Device lossless(Device d = Device{}) {
  const double q_loaded = d.signal_rates().q_loaded;
  d.signal.escape_efficiency = 1.0;
  d.signal.q_loaded = q_loaded;
  return d;
}

}  // namespace fixtures
