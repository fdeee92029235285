#include "ringsqueeze/output.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>

namespace ringsqueeze {

namespace {

using nlohmann::json;

Error io_error(const std::string& what) { return Error(ErrorKind::kConfig, "io", what); }

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path.string());
  return out;
}

std::string num(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

json rates_json(const DerivedRates& r) {
  return {{"gamma_coupling_per_s", r.gamma_coupling},
          {"m_scattering_per_s", r.m_scattering},
          {"gamma_total_per_s", r.gamma_total},
          {"q_loaded", r.q_loaded},
          {"dwell_time_s", r.dwell_time}};
}

json phase_json(const PhaseMatchReport& p) {
  return {{"delta_res_rad_per_s", p.delta_res},
          {"delta_spm_rad_per_s", p.delta_spm},
          {"delta_xpm_rad_per_s", p.delta_xpm},
          {"delta_net_rad_per_s", p.delta_net}};
}

// '#' lines shared by every CSV file.
void csv_preamble(std::ostream& out, const RunConfig& config, const std::string& kind) {
  out << "# format_version: " << kOutputFormat << "\n";
  out << "# content: " << kind << "\n";
  out << "# config: " << config.resolved.dump() << "\n";
}

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path) : out_(open_out(path, std::ios::binary)), path_(path) {}

  void bytes(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }

  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, 8);
  }

  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, 4);
  }

  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }

  void complex(cplx z) {
    f64(z.real());
    f64(z.imag());
  }

  void header(const char magic[8], const TimeGrid& grid, double gamma_total) {
    bytes(magic, 8);
    u32(1);
    u32(0);
    u64(grid.n_points);
    f64(grid.t_start);
    f64(grid.t_end);
    f64(gamma_total);
  }

  void close() {
    out_.close();
    if (!out_) throw io_error("failed writing " + path_.string());
  }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

json device_json(const RunConfig& config, const Device& device, const TimeGrid& grid) {
  return {{"coupling_rad_per_s", device.coupling},
          {"drive_power_W", device.drive_power},
          {"beta_d", device.beta_d},
          {"phase_match", phase_json(device.phase)},
          {"rates", {{"drive", rates_json(device.drive_rates)},
                     {"signal", rates_json(device.signal_rates)},
                     {"pump", rates_json(device.pump_rates)}}},
          {"signal_dwell_time_s", device.dwell_time},
          {"pulse_fwhm_s", device.pulse_fwhm},
          {"pulse_center_s", config.pulse.center},
          {"grid", {{"rule", config.grid.automatic ? "auto" : "explicit"},
                    {"start_s", grid.t_start},
                    {"end_s", grid.t_end},
                    {"points", grid.n_points},
                    {"dt_s", grid.dt()}}}};
}

json run_json(const RunResult& run) {
  json modes = json::array();
  for (const auto& m : run.modes.modes) {
    modes.push_back({{"photons", m.photons},
                     {"pair_amplitude_re", m.pair_amplitude.real()},
                     {"pair_amplitude_im", m.pair_amplitude.imag()},
                     {"pair_amplitude_abs", std::abs(m.pair_amplitude)},
                     {"r_pure", m.r_pure}});
  }
  const auto& v = run.variances;
  const auto& t = run.thermal;
  json out = {{"energy_J", run.energy},
              {"vacuum", run.vacuum},
              {"pump_step_doubling_error", run.pump_step_error},
              {"su11_drift", run.su11_drift},
              {"trace_photons", run.trace_photons},
              {"total_photons", run.modes.total_photons},
              {"eta_escape", run.modes.eta_escape},
              {"schmidt_number", run.vacuum ? json(nullptr) : json(run.modes.schmidt_number)},
              {"schmidt_number_undefined", run.vacuum},
              {"squeezing", {{"v_squeezed", v.v_squeezed},
                             {"v_antisqueezed", v.v_antisqueezed},
                             {"v_anti_pure", v.v_anti_pure},
                             {"v_squeezed_db", v.v_squeezed_db},
                             {"v_antisqueezed_db", v.v_antisqueezed_db},
                             {"v_anti_pure_db", v.v_anti_pure_db}}},
              {"thermal_equivalents", {{"reported", {{"n_thermal", t.n_thermal_reported},
                                                     {"r_squeeze", t.r_squeeze_reported}}},
                                       {"williamson", {{"n_thermal", t.n_thermal_williamson},
                                                       {"r_squeeze", t.r_squeeze_williamson}}},
                                       {"r_pure", t.r_pure}}},
              {"dominant_mode_fwhm_s", run.vacuum ? json(nullptr) : json(run.width.fwhm)},
              {"dominant_mode_multi_peak", run.width.multi_peak},
              {"modes", modes}};
  if (run.modes.modes.size() >= 2 && run.modes.modes[1].photons > 0.0) {
    out["photon_ratio_0_1"] = run.modes.modes[0].photons / run.modes.modes[1].photons;
  } else {
    out["photon_ratio_0_1"] = nullptr;
  }
  if (run.purity) {
    const auto& p = *run.purity;
    out["purity_check"] = {{"threshold", p.threshold},
                           {"modes_above_threshold", p.modes_above},
                           {"modes_checked", p.modes_checked},
                           {"max_pairing_error", p.max_pairing_error},
                           {"min_profile_fidelity", p.min_profile_fidelity}};
  }
  return out;
}

json noise_json(const RunConfig& config, const NoiseReport& r) {
  return {{"format_version", kOutputFormat},
          {"config", config.resolved},
          {"noise", {{"delta_rad_per_s", r.delta},
                     {"linewidth_rad_per_s", r.linewidth},
                     {"suppression", r.suppression},
                     {"snr", r.snr},
                     {"snr_structural", r.snr_structural},
                     {"xi_m_per_W", r.xi},
                     {"bragg_scattering_modeled", r.bragg_scattering_modeled}}}};
}

json phase_match_json(const RunConfig& config, const Device& device) {
  // Power that phase-matches the configured mismatch; 0 when none is needed.
  json power = nullptr;
  const double delta_res = device.phase.delta_res;
  if (delta_res >= 0.0) {
    power = phase_match_power(delta_res, device.coupling, config.drive_mode, device.drive_rates);
  }
  return {{"format_version", kOutputFormat},
          {"config", config.resolved},
          {"coupling_rad_per_s", device.coupling},
          {"drive_power_W", device.drive_power},
          {"beta_d", device.beta_d},
          {"phase_match", phase_json(device.phase)},
          {"phase_match_power_W", power}};
}

json error_json(const Error& error) {
  const char* kind = error.kind() == ErrorKind::kConfig ? "config"
                     : error.kind() == ErrorKind::kSolver ? "solver"
                                                          : "physics";
  return {{"format_version", kOutputFormat},
          {"error", {{"kind", kind}, {"code", error.code()}, {"message", error.what()},
                     {"exit_code", error.exit_code()}}}};
}

void write_json(const std::filesystem::path& path, const json& value) {
  auto out = open_out(path);
  out << value.dump(2) << "\n";
  out.close();
  if (!out) throw io_error("failed writing " + path.string());
}

void write_simulation(const std::filesystem::path& dir, const RunConfig& config, const Device& device,
                      const RunResult& run) {
  ensure_dir(dir);
  json report = {{"format_version", kOutputFormat},
                 {"config", config.resolved},
                 {"device", device_json(config, device, run.grid)},
                 {"run", run_json(run)}};
  write_json(dir / "report.json", report);

  auto out = open_out(dir / "modes.csv");
  csv_preamble(out, config, "Schmidt-mode profiles f(t), normalized so sum_k w_k |f(t_k)|^2 = 1 (units s^-1/2)");
  out << "time_s";
  for (std::size_t i = 0; i < run.modes.modes.size(); ++i) out << ",mode_" << i << "_re,mode_" << i << "_im";
  out << "\n";
  for (std::size_t k = 0; k < run.grid.n_points; ++k) {
    out << num(run.grid.time(k));
    for (const auto& m : run.modes.modes) {
      const cplx f = m.profile[static_cast<Eigen::Index>(k)];
      out << "," << num(f.real()) << "," << num(f.imag());
    }
    out << "\n";
  }
  out.close();
  if (!out) throw io_error("failed writing modes.csv");

  if (run.green) dump_green(dir / "green.bin", *run.green);
  if (run.kernels) dump_kernels(dir / "kernels.bin", *run.kernels);
}

void write_sweep(const std::filesystem::path& dir, const RunConfig& config, const Device& device,
                 const TimeGrid& grid, const SweepResult& sweep) {
  ensure_dir(dir);
  const std::size_t n_modes = 10;

  auto out = open_out(dir / "sweep.csv");
  csv_preamble(out, config, "pulse-energy sweep, one row per energy");
  out << "# device: " << device_json(config, device, grid).dump() << "\n";
  if (sweep.complete) {
    out << "# status: complete\n";
  } else {
    out << "# status: incomplete; failed at energy_pJ " << num(sweep.failed_energy * 1e12) << ": ["
        << sweep.failure->code() << "] " << sweep.failure->what() << "\n";
  }
  out << "energy_pJ";
  for (std::size_t i = 0; i < n_modes; ++i) out << ",n_mode_" << i;
  out << ",v_squeezed_db,v_antisqueezed_db,v_anti_pure_db,schmidt_k,fidelity_vs_lowest_energy,pulse_fwhm_ns\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t r = 0; r < sweep.runs.size(); ++r) {
    const RunResult& run = sweep.runs[r];
    out << num(run.energy * 1e12);
    for (std::size_t i = 0; i < n_modes; ++i) {
      out << "," << num(i < run.modes.modes.size() ? run.modes.modes[i].photons : nan);
    }
    out << "," << num(run.variances.v_squeezed_db) << "," << num(run.variances.v_antisqueezed_db) << ","
        << num(run.variances.v_anti_pure_db) << "," << num(run.vacuum ? nan : run.modes.schmidt_number) << ","
        << num(sweep.fidelity[r] ? *sweep.fidelity[r] : nan) << "," << num(run.vacuum ? nan : run.width.fwhm * 1e9)
        << "\n";
  }
  out.close();
  if (!out) throw io_error("failed writing sweep.csv");

  auto modes = open_out(dir / "modes.csv");
  csv_preamble(modes, config, "dominant Schmidt-mode profile per energy, long format");
  modes << "energy_pJ,time_s,re,im\n";
  for (const auto& run : sweep.runs) {
    if (run.modes.modes.empty()) continue;
    const auto& f = run.modes.modes.front().profile;
    for (std::size_t k = 0; k < run.grid.n_points; ++k) {
      const cplx z = f[static_cast<Eigen::Index>(k)];
      modes << num(run.energy * 1e12) << "," << num(run.grid.time(k)) << "," << num(z.real()) << ","
            << num(z.imag()) << "\n";
    }
  }
  modes.close();
  if (!modes) throw io_error("failed writing modes.csv");
}

void dump_green(const std::filesystem::path& path, const GreenTable& green) {
  BinaryWriter w(path);
  w.header("RSQGREEN", green.grid(), green.gamma_total());
  const std::size_t n = green.size();
  for (int component = 0; component < 4; ++component) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k <= j; ++k) {
        switch (component) {
          case 0: w.complex(green.g11(j, k)); break;
          case 1: w.complex(green.g12(j, k)); break;
          case 2: w.complex(green.g21(j, k)); break;
          default: w.complex(green.g22(j, k)); break;
        }
      }
    }
  }
  w.close();
}

void dump_kernels(const std::filesystem::path& path, const MomentKernels& kernels) {
  BinaryWriter w(path);
  w.header("RSQKERNL", kernels.grid, 0.0);
  for (const Eigen::MatrixXcd* m : {&kernels.n, &kernels.m}) {
    for (Eigen::Index j = 0; j < m->rows(); ++j) {
      for (Eigen::Index k = 0; k < m->cols(); ++k) w.complex((*m)(j, k));
    }
  }
  for (double x : kernels.weights) w.f64(x);
  w.close();
}

}  // namespace ringsqueeze
