#include "ringsqueeze/pump.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "ringsqueeze/error.hpp"
#include "ringsqueeze/rk4.hpp"

namespace ringsqueeze {

TimeGrid::TimeGrid(double start, double end, std::size_t n) : t_start(start), t_end(end), n_points(n) {
  validate();
}

void TimeGrid::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw invalid_parameter("time grid needs t_end > t_start");
  }
  if (n_points < 16) throw invalid_parameter("time grid needs at least 16 points");
}

std::vector<double> TimeGrid::weights() const {
  std::vector<double> w(n_points, dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::vector<cplx> InputPulse::sample(const TimeGrid& grid) const {
  std::vector<cplx> out(grid.n_points);
  for (std::size_t k = 0; k < grid.n_points; ++k) out[k] = (*this)(grid.time(k));
  return out;
}

double pulse_energy(const std::vector<cplx>& alpha_in, const TimeGrid& grid, double omega_p,
                    double v_g) {
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < alpha_in.size(); ++k) sum += w[k] * std::norm(alpha_in[k]);
  return constants::hbar * omega_p * v_g * sum;
}

InputPulse gaussian_pulse(double energy, double fwhm, double center, const TimeGrid& grid,
                          double omega_p, double v_g) {
  grid.validate();
  if (!(energy >= 0.0) || !std::isfinite(energy)) throw invalid_parameter("pulse energy must be >= 0");
  if (!(fwhm > 0.0)) throw invalid_parameter("pulse fwhm must be > 0");
  if (!(omega_p > 0.0) || !(v_g > 0.0)) throw invalid_parameter("omega_p and v_g must be > 0");
  if (grid.t_start > center - 4.0 * fwhm || grid.t_end < center + 4.0 * fwhm) {
    std::ostringstream msg;
    msg << "time grid [" << grid.t_start << ", " << grid.t_end << "] s truncates the pulse; it must cover "
        << "center +/- 4 fwhm = [" << center - 4.0 * fwhm << ", " << center + 4.0 * fwhm << "] s";
    throw Error(ErrorKind::kConfig, "grid-truncation", msg.str());
  }
  if (energy == 0.0) return InputPulse([](double) { return cplx{}; });

  // |α|² ∝ exp(-4 ln2 (t - c)² / fwhm²)
  const double a = 2.0 * std::log(2.0) / (fwhm * fwhm);
  auto shape = [a, center](double t) { return std::exp(-a * (t - center) * (t - center)); };

  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double s = shape(grid.time(k));
    sum += w[k] * s * s;
  }
  const double scale = std::sqrt(energy / (constants::hbar * omega_p * v_g * sum));
  return InputPulse([scale, shape](double t) { return cplx{scale * shape(t), 0.0}; });
}

InputPulse sampled_pulse(std::vector<cplx> samples, const TimeGrid& grid) {
  grid.validate();
  if (samples.size() != grid.n_points) {
    throw invalid_parameter("pulse samples must match the grid length");
  }
  auto data = std::make_shared<const std::vector<cplx>>(std::move(samples));
  return InputPulse([data, grid](double t) -> cplx {
    const double x = (t - grid.t_start) / grid.dt();
    if (x < 0.0 || x > static_cast<double>(grid.n_points - 1)) return {};
    const auto k = std::min(static_cast<std::size_t>(x), grid.n_points - 2);
    const double f = x - static_cast<double>(k);
    return (1.0 - f) * (*data)[k] + f * (*data)[k + 1];
  });
}

namespace {

struct PumpRhs {
  double gamma_total;
  double coupling;
  double gamma_amp;   // γ_P = sqrt(2 Γ_P v_g)

  cplx operator()(cplx beta, cplx alpha) const {
    return cplx(-gamma_total, coupling * std::norm(beta)) * beta - kI * gamma_amp * alpha;
  }
};

}  // namespace

PumpSolution integrate_pump(const InputPulse& alpha_in, const DerivedRates& pump_rates,
                            double coupling, double v_g, const TimeGrid& grid,
                            const PumpIntegrationOptions& options) {
  grid.validate();
  const std::size_t n = grid.n_points;
  const double h = grid.dt();
  const PumpRhs rhs{pump_rates.gamma_total, coupling, std::sqrt(2.0 * pump_rates.gamma_coupling * v_g)};

  PumpSolution sol;
  sol.grid = grid;
  sol.alpha_in = alpha_in.sample(grid);
  sol.beta_p.resize(n);
  sol.beta_p_mid.resize(n - 1);

  // Fine pass at dt/2; even sub-steps land on the grid, odd ones on midpoints.
  const double hf = 0.5 * h;
  cplx beta = options.beta_initial;
  sol.beta_p[0] = beta;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double t0 = grid.time(k);
    for (int half = 0; half < 2; ++half) {
      const double ts = t0 + half * hf;
      const cplx a0 = alpha_in(ts);
      const cplx am = alpha_in(ts + 0.5 * hf);
      const cplx a1 = alpha_in(ts + hf);
      beta = rk4_step(beta, hf, [&](Stage s, cplx y) {
        return rhs(y, s == Stage::kStart ? a0 : (s == Stage::kMid ? am : a1));
      });
      if (half == 0) sol.beta_p_mid[k] = beta;
    }
    sol.beta_p[k + 1] = beta;
  }

  // Coarse pass at dt for the step-doubling estimate.
  double max_diff = 0.0;
  double max_abs = 0.0;
  beta = options.beta_initial;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const cplx a0 = alpha_in(grid.time(k));
    const cplx am = alpha_in(grid.midpoint(k));
    const cplx a1 = alpha_in(grid.time(k + 1));
    beta = rk4_step(beta, h, [&](Stage s, cplx y) {
      return rhs(y, s == Stage::kStart ? a0 : (s == Stage::kMid ? am : a1));
    });
    max_diff = std::max(max_diff, std::abs(beta - sol.beta_p[k + 1]));
  }
  for (const auto& b : sol.beta_p) {
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) {
      throw solver_error("grid-too-coarse", "pump integration diverged; refine the time grid");
    }
    max_abs = std::max(max_abs, std::abs(b));
  }
  sol.step_doubling_error = max_abs > 0.0 ? max_diff / max_abs : 0.0;
  if (sol.step_doubling_error > options.tolerance) {
    std::ostringstream msg;
    msg << "pump step-doubling error " << sol.step_doubling_error << " exceeds tolerance "
        << options.tolerance << "; use more grid points";
    throw solver_error("grid-too-coarse", msg.str());
  }
  return sol;
}

std::vector<cplx> effective_pump(const std::vector<cplx>& beta_p, double beta_d, double coupling) {
  std::vector<cplx> g(beta_p.size());
  const cplx factor = 2.0 * kI * coupling * beta_d;
  std::transform(beta_p.begin(), beta_p.end(), g.begin(), [&](cplx b) { return factor * b; });
  return g;
}

void effective_pump(PumpSolution& pump, double beta_d, double coupling) {
  pump.g = effective_pump(pump.beta_p, beta_d, coupling);
  pump.g_mid = effective_pump(pump.beta_p_mid, beta_d, coupling);
}

}  // namespace ringsqueeze
