#include "ringsqueeze/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "ringsqueeze/error.hpp"

namespace ringsqueeze {

Device resolve_device(const RunConfig& config) {
  Device d;
  d.drive_rates = derive_rates(config.drive_mode);
  d.signal_rates = derive_rates(config.signal_mode);
  d.pump_rates = derive_rates(config.pump_mode);
  d.coupling = nonlinear_coupling(config.resonator, config.signal_mode.omega);

  const DriveSettings& drive = config.drive;
  if (drive.auto_phase_match) {
    d.drive_power = phase_match_power(*drive.delta_res, d.coupling, config.drive_mode, d.drive_rates);
  } else {
    d.drive_power = *drive.power;
  }
  d.beta_d = drive_amplitude(d.drive_power, config.drive_mode, d.drive_rates);
  if (drive.delta_res) {
    d.phase = spm_xpm_report(d.beta_d, d.coupling, *drive.delta_res);
  } else {
    // Δ_net given directly; report the mismatch it implies.
    const double spm = d.coupling * d.beta_d * d.beta_d;
    d.phase = spm_xpm_report(d.beta_d, d.coupling, *drive.delta_net + spm);
    d.phase.delta_net = *drive.delta_net;
  }

  const double gamma_s = d.signal_rates.gamma_total;
  d.dwell_time = config.pulse.dwell == DwellConvention::kInverseTotal ? 1.0 / gamma_s : 0.5 / gamma_s;
  d.pulse_fwhm = config.pulse.fwhm ? *config.pulse.fwhm : config.pulse.fwhm_relative * d.dwell_time;
  return d;
}

TimeGrid auto_grid(double center, double fwhm, double gamma_total_s, double gamma_total_p) {
  if (!(fwhm > 0.0) || !(gamma_total_s > 0.0) || !(gamma_total_p > 0.0)) {
    throw invalid_parameter("auto grid needs positive fwhm and damping rates");
  }
  const double start = center - 5.0 * fwhm;
  const double end = center + 8.0 / gamma_total_s;
  const double dt_max = std::min(fwhm / 20.0, 1.0 / (20.0 * gamma_total_p));
  std::size_t n = 16;
  while ((end - start) / static_cast<double>(n - 1) > dt_max) n *= 2;
  return TimeGrid(start, end, n);
}

TimeGrid resolve_grid(const RunConfig& config, const Device& device) {
  const double center = config.pulse.center;
  const double fwhm = device.pulse_fwhm;
  TimeGrid grid;
  if (config.grid.automatic) {
    grid = auto_grid(center, fwhm, device.signal_rates.gamma_total, device.pump_rates.gamma_total);
  } else {
    grid = TimeGrid(config.grid.start, config.grid.end, config.grid.points);
    const double latest = center - 5.0 * fwhm;
    if (grid.t_start > latest + 1e-9 * fwhm) {
      std::ostringstream msg;
      msg << "grid starts at " << grid.t_start << " s; the pump must be off there, so start at or before "
          << "center - 5 fwhm = " << latest << " s";
      throw Error(ErrorKind::kConfig, "grid-start", msg.str());
    }
  }
  const MomentOptions limits;
  if (grid.n_points > limits.max_points && !config.grid.allow_large) {
    std::ostringstream msg;
    msg << "grid of " << grid.n_points << " points exceeds the cap of " << limits.max_points
        << " (dense kernels); set grid.allow_large to override";
    throw Error(ErrorKind::kConfig, "grid-too-large", msg.str());
  }
  return grid;
}

PurityCheck purity_check(const MomentKernels& kernels, const ModeDecomposition& modes, double threshold) {
  PurityCheck out;
  out.threshold = threshold;
  if (modes.modes.empty() || !(modes.modes.front().photons > 0.0)) return out;
  const double n0 = modes.modes.front().photons;
  for (double n : modes.all_photons) {
    if (n > threshold * n0) ++out.modes_above;
  }
  out.modes_checked = std::min(out.modes_above, modes.modes.size());
  if (out.modes_checked == 0) return out;

  const TakagiModes tk = takagi_modes(kernels, out.modes_checked);
  const double eta = modes.eta_escape;
  for (std::size_t i = 0; i < out.modes_checked; ++i) {
    const double n = modes.modes[i].photons / eta;
    const double m = tk.amplitudes[i] / eta;
    out.max_pairing_error = std::max(out.max_pairing_error, std::abs(m / std::sqrt(n * (n + 1.0)) - 1.0));
    const auto col = static_cast<Eigen::Index>(i);
    out.min_profile_fidelity = std::min(
        out.min_profile_fidelity, mode_fidelity(modes.modes[i].profile, tk.profiles.col(col), kernels.weights));
  }
  return out;
}

RunResult run_single(const RunConfig& config, const Device& device, const TimeGrid& grid, double energy) {
  const double v_g = config.resonator.v_g();
  const double omega_p = config.pump_mode.omega;

  InputPulse alpha;
  RunResult r;
  r.grid = grid;
  if (config.pulse.shape == PulseShape::kGaussian) {
    alpha = gaussian_pulse(energy, device.pulse_fwhm, config.pulse.center, grid, omega_p, v_g);
    r.energy = energy;
  } else {
    const auto& s = config.pulse.samples;
    const TimeGrid sample_grid(config.pulse.sample_start,
                               config.pulse.sample_start + config.pulse.sample_step * static_cast<double>(s.size() - 1),
                               s.size());
    alpha = sampled_pulse(s, sample_grid);
    r.energy = pulse_energy(alpha.sample(grid), grid, omega_p, v_g);
  }

  PumpIntegrationOptions pump_options;
  pump_options.tolerance = config.solver.pump_tolerance;
  PumpSolution pump = integrate_pump(alpha, device.pump_rates, device.coupling, v_g, grid, pump_options);
  effective_pump(pump, device.beta_d, device.coupling);
  r.pump_step_error = pump.step_doubling_error;

  const auto& sig = device.signal_rates;
  const CouplingMatrixSeries series = coupling_matrix(pump, device.phase.delta_net, device.coupling, sig.gamma_total);
  GreenOptions green_options;
  green_options.su11_tolerance = config.solver.su11_tolerance;
  GreenTable green = solve_green(series, green_options);
  r.su11_drift = green.su11_drift();

  MomentOptions moment_options;
  moment_options.allow_large = config.grid.allow_large;
  MomentKernels kernels = output_moments(green, sig.gamma_coupling, sig.gamma_total, moment_options);
  r.trace_photons = kernels.trace_photons();

  const double eta = sig.escape_efficiency();
  const std::size_t count = config.solver.takagi_check ? std::max(config.solver.mode_count, kPurityModes)
                                                       : config.solver.mode_count;
  r.modes = decompose(kernels, eta, count);
  r.vacuum = !(r.modes.total_photons > 0.0) || r.modes.modes.empty() || !(r.modes.modes.front().photons > 0.0);
  if (config.solver.takagi_check && !r.vacuum) r.purity = purity_check(kernels, r.modes);
  if (r.modes.modes.size() > config.solver.mode_count) r.modes.modes.resize(config.solver.mode_count);

  if (r.vacuum) {
    r.width.multi_peak = true;
  } else {
    const Mode& top = r.modes.modes.front();
    r.variances = quadrature_variances(top.photons, top.pair_amplitude, top.r_pure);
    r.thermal = thermal_equivalents(top.photons, top.pair_amplitude, eta);
    r.width = profile_fwhm(top.profile, grid);
  }

  if (config.output.dump_green) r.green = std::move(green);
  if (config.output.dump_kernels) r.kernels = std::move(kernels);
  return r;
}

SweepResult run_sweep(const RunConfig& config, const Device& device, const TimeGrid& grid) {
  const auto& energies = config.pulse.energies;
  const std::size_t n = energies.size();
  std::vector<std::optional<RunResult>> results(n);
  std::vector<std::optional<Error>> errors(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_single(config, device, grid, energies[i]);
      } catch (const Error& e) {
        errors[i] = e;
      } catch (const std::bad_alloc&) {
        errors[i] = Error(ErrorKind::kSolver, "out-of-memory", "out of memory; reduce grid.points");
      } catch (const std::exception& e) {
        errors[i] = Error(ErrorKind::kSolver, "internal", e.what());
      }
    }
  };
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      out.complete = false;
      out.failure = errors[i];
      out.failed_energy = energies[i];
      break;
    }
    out.runs.push_back(std::move(*results[i]));
  }

  if (!out.runs.empty()) {
    const RunResult& ref = out.runs.front();
    const auto weights = grid.weights();
    for (const auto& run : out.runs) {
      if (ref.vacuum || run.vacuum) {
        out.fidelity.push_back(std::nullopt);
      } else {
        out.fidelity.push_back(mode_fidelity(ref.modes.modes.front().profile, run.modes.modes.front().profile, weights));
      }
    }
  }
  return out;
}

NoiseReport noise_report(const RunConfig& config, const Device& device) {
  const NoiseSettings& ns = config.noise;
  double q = 0.0;
  switch (ns.linewidth_mode) {
    case ModeLabel::kDrive: q = device.drive_rates.q_loaded; break;
    case ModeLabel::kSignal: q = device.signal_rates.q_loaded; break;
    case ModeLabel::kPump: q = device.pump_rates.q_loaded; break;
  }
  if (ns.q_loaded) q = *ns.q_loaded;
  const double omega_d = config.drive_mode.omega;
  if (!(device.drive_power > 0.0)) throw invalid_parameter("noise budget needs a positive drive power");
  if (ns.xi) {
    if (!config.resonator.ring_radius) {
      throw Error(ErrorKind::kConfig, "configuration", "noise budget needs resonator ring_radius_um");
    }
    return noise_budget_from_xi(*ns.xi, omega_d, q, *config.resonator.ring_radius, device.drive_power,
                                ns.pump_power);
  }
  return noise_budget(config.resonator, omega_d, q, device.drive_power, ns.pump_power);
}

}  // namespace ringsqueeze
