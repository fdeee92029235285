#pragma once

// Classical pump: the input pulse in the bus waveguide, the intraresonator
// envelope with self-phase modulation, and the effective parametric gain g(t).

#include <functional>
#include <vector>

#include "ringsqueeze/constants.hpp"
#include "ringsqueeze/params.hpp"

namespace ringsqueeze {

/// Uniform time grid, t_k = t_start + k dt.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t n_points = 0;

  TimeGrid() = default;
  TimeGrid(double start, double end, std::size_t n);

  double dt() const { return (t_end - t_start) / static_cast<double>(n_points - 1); }
  double time(std::size_t k) const { return t_start + static_cast<double>(k) * dt(); }
  double midpoint(std::size_t k) const { return time(k) + 0.5 * dt(); }
  /// Trapezoid weights w_k (s).
  std::vector<double> weights() const;
  void validate() const;
};

/// Input pulse amplitude α_in(t) in the channel. Evaluable at any time so the
/// integrator can sample it at sub-step points.
class InputPulse {
 public:
  InputPulse() = default;
  explicit InputPulse(std::function<cplx(double)> amplitude) : amplitude_(std::move(amplitude)) {}

  cplx operator()(double t) const { return amplitude_ ? amplitude_(t) : cplx{}; }
  std::vector<cplx> sample(const TimeGrid& grid) const;

 private:
  std::function<cplx(double)> amplitude_;
};

/// Transform-limited Gaussian pulse with intensity FWHM `fwhm`, scaled so the
/// trapezoid energy ħ ω_P v_g Σ w_k |α_k|² on `grid` equals `energy` exactly.
/// Refuses grids that do not cover center ± 4 fwhm.
InputPulse gaussian_pulse(double energy, double fwhm, double center, const TimeGrid& grid,
                          double omega_p, double v_g);

/// Linear interpolation of user samples given on `grid`; zero outside it.
InputPulse sampled_pulse(std::vector<cplx> samples, const TimeGrid& grid);

/// Pulse energy carried by α_in on the grid (trapezoid rule).
double pulse_energy(const std::vector<cplx>& alpha_in, const TimeGrid& grid, double omega_p,
                    double v_g);

struct PumpSolution {
  TimeGrid grid;
  std::vector<cplx> alpha_in;     // on the grid
  std::vector<cplx> beta_p;       // β̄_P(t_k)
  std::vector<cplx> beta_p_mid;   // β̄_P(t_k + dt/2), n_points - 1 entries
  std::vector<cplx> g;            // g(t_k)
  std::vector<cplx> g_mid;
  /// max |β_dt - β_dt/2| / max |β_dt/2| from the step-doubling self-check.
  double step_doubling_error = 0.0;
};

struct PumpIntegrationOptions {
  double tolerance = 1e-6;   // bound on step_doubling_error
  cplx beta_initial{};
};

/// Integrates dβ/dt = (-Γ̄_P + iΛ|β|²)β - iγ_P α_in(t), γ_P = sqrt(2 Γ_P v_g),
/// with fixed-step RK4 at dt/2 (grid and midpoint samples are kept) and checks
/// the result against a full-dt pass. Leaves g empty.
PumpSolution integrate_pump(const InputPulse& alpha_in, const DerivedRates& pump_rates,
                            double coupling, double v_g, const TimeGrid& grid,
                            const PumpIntegrationOptions& options = {});

/// g(t) = 2iΛβ̄_D β̄_P(t) on both the grid and midpoint samples.
void effective_pump(PumpSolution& pump, double beta_d, double coupling);

std::vector<cplx> effective_pump(const std::vector<cplx>& beta_p, double beta_d, double coupling);

}  // namespace ringsqueeze
