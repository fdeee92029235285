#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ringsqueeze/error.hpp"
#include "ringsqueeze/output.hpp"
#include "ringsqueeze/pipeline.hpp"

using namespace ringsqueeze;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = RINGSQUEEZE_CONFIG_DIR;

nlohmann::json fig2() { return read_json(kConfigs / "fig2.json"); }

int config_exit(const nlohmann::json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.exit_code();
  }
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ringsqueeze_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("reference configuration parses with units converted") {
  const RunConfig c = parse_config(fig2());
  CHECK(c.resonator.round_trip_length == doctest::Approx(400e-6));
  CHECK(c.signal_mode.omega == doctest::Approx(2.0 * M_PI * 193e12));
  CHECK(c.signal_mode.escape_efficiency == 0.9);
  CHECK(*c.drive.power == doctest::Approx(0.2));
  CHECK(c.pulse.energies.size() == 1);
  CHECK(c.pulse.energies[0] == doctest::Approx(100e-12));
  CHECK(c.grid.automatic);
  CHECK(c.solver.mode_count == 10);
  CHECK(c.resolved["solver"]["pump_tolerance"] == 1e-6);
  CHECK(c.resolved["noise"]["pump_power_mW"] == 1.0);
  CHECK(c.resolved["pulse"]["dwell_convention"] == "inverse_total_rate");
  CHECK(parse_config(c.resolved).resolved == c.resolved);
}

TEST_CASE("configuration errors") {
  auto doc = fig2();
  doc["resonator"]["color"] = "red";
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["bogus"] = 1;
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["modes"]["signal"].erase("q_intrinsic");
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["pulse"].erase("energy_pJ");
  doc["pulse"]["energies_pJ"] = {10.0, 1.0};
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["modes"]["signal"]["escape_efficiency"] = 1.0;
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["modes"]["signal"]["frequency_Hz"] = 193e12;
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["format_version"] = "ringsqueeze-config/9";
  CHECK(config_exit(doc) == 2);

  doc = fig2();
  doc["grid"] = {{"auto", true}, {"points", 64}};
  CHECK(config_exit(doc) == 2);
}

TEST_CASE("energy lists") {
  const auto a = parse_energy_list("1,2.5,10");
  REQUIRE(a.size() == 3);
  CHECK(a[1] == 2.5);
  const auto b = parse_energy_list("log:1,100,10");
  REQUIRE(b.size() == 10);
  CHECK(b.front() == doctest::Approx(1.0));
  CHECK(b.back() == doctest::Approx(100.0));
  CHECK(b[1] / b[0] == doctest::Approx(std::pow(100.0, 1.0 / 9.0)));
  CHECK_THROWS_AS(parse_energy_list("1,x"), Error);
  CHECK_THROWS_AS(parse_energy_list("log:1,100"), Error);
  CHECK_THROWS_AS(parse_energy_list(""), Error);
  const auto doc = with_energies(fig2(), {1.0, 2.0});
  CHECK(parse_config(doc).pulse.energies.size() == 2);
}

TEST_CASE("auto grid rule") {
  const RunConfig c = parse_config(fig2());
  const Device d = resolve_device(c);
  const TimeGrid g = resolve_grid(c, d);
  const double fwhm = 0.1 / d.signal_rates.gamma_total;
  CHECK(d.pulse_fwhm == doctest::Approx(fwhm).epsilon(1e-14));
  CHECK(g.t_start == doctest::Approx(-5.0 * fwhm).epsilon(1e-14));
  CHECK(g.t_end == doctest::Approx(8.0 / d.signal_rates.gamma_total).epsilon(1e-14));
  const double dt_max = std::min(fwhm / 20.0, 1.0 / (20.0 * d.pump_rates.gamma_total));
  CHECK(g.dt() <= dt_max);
  CHECK((g.t_end - g.t_start) / static_cast<double>(g.n_points / 2 - 1) > dt_max);
  CHECK((g.n_points & (g.n_points - 1)) == 0);
  CHECK(g.n_points == 2048);
}

TEST_CASE("dwell convention changes the default pulse width") {
  auto doc = fig2();
  doc["pulse"]["dwell_convention"] = "half_inverse_total_rate";
  const RunConfig c = parse_config(doc);
  const Device d = resolve_device(c);
  CHECK(d.pulse_fwhm == doctest::Approx(0.05 / d.signal_rates.gamma_total).epsilon(1e-14));
}

TEST_CASE("explicit grids are validated") {
  auto doc = fig2();
  doc["grid"] = {{"start_ps", -10.0}, {"end_ps", 2000.0}, {"points", 512}};
  const RunConfig c = parse_config(doc);
  try {
    resolve_grid(c, resolve_device(c));
    FAIL("expected grid-start");
  } catch (const Error& e) {
    CHECK(e.code() == "grid-start");
  }

  doc["grid"] = {{"start_ps", -200.0}, {"end_ps", 2000.0}, {"points", 8192}};
  const RunConfig big = parse_config(doc);
  CHECK_THROWS_AS(resolve_grid(big, resolve_device(big)), Error);
  doc["grid"]["allow_large"] = true;
  const RunConfig allowed = parse_config(doc);
  CHECK(resolve_grid(allowed, resolve_device(allowed)).n_points == 8192);
}

TEST_CASE("automatic phase matching") {
  auto doc = fig2();
  doc["drive"] = {{"auto_phase_match", true}, {"delta_res_rad_per_s", 1.3e10}};
  const Device d = resolve_device(parse_config(doc));
  CHECK(d.phase.delta_net == doctest::Approx(0.0).epsilon(1e-9 * 1.3e10));
  CHECK(d.drive_power == doctest::Approx(0.2).epsilon(0.02));
  CHECK(d.phase.delta_xpm == 2.0 * d.phase.delta_spm);
}

TEST_CASE("zero pulse energy gives vacuum output") {
  auto doc = fig2();
  doc["pulse"]["energy_pJ"] = 0.0;
  doc["grid"] = {{"start_ps", -200.0}, {"end_ps", 2000.0}, {"points", 512}};
  const RunConfig c = parse_config(doc);
  const Device d = resolve_device(c);
  const RunResult r = run_single(c, d, resolve_grid(c, d), 0.0);
  CHECK(r.vacuum);
  CHECK(r.variances.v_squeezed_db == 0.0);
  CHECK(r.variances.v_antisqueezed_db == 0.0);
  const auto j = run_json(r);
  CHECK(j["schmidt_number"].is_null());
  CHECK(j["schmidt_number_undefined"] == true);
}

TEST_CASE("simulation files are deterministic and carry provenance") {
  auto doc = fig2();
  doc["pulse"]["energy_pJ"] = 5.0;
  doc["grid"] = {{"start_ps", -200.0}, {"end_ps", 2000.0}, {"points", 512}};
  doc["output"] = {{"dump_green", true}, {"dump_kernels", true}};
  const RunConfig c = parse_config(doc);
  const Device d = resolve_device(c);
  const TimeGrid g = resolve_grid(c, d);
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  write_simulation(a, c, d, run_single(c, d, g, c.pulse.energies[0]));
  write_simulation(b, c, d, run_single(c, d, g, c.pulse.energies[0]));
  for (const char* name : {"report.json", "modes.csv", "green.bin", "kernels.bin"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }

  const auto report = read_json(a / "report.json");
  CHECK(report["format_version"] == kOutputFormat);
  CHECK(report["config"] == c.resolved);
  CHECK(parse_config(report["config"]).resolved == c.resolved);

  std::ifstream csv(a / "modes.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == std::string("# format_version: ") + kOutputFormat);
  bool has_config = false;
  while (std::getline(csv, line) && line.rfind("#", 0) == 0) {
    if (line.rfind("# config: ", 0) == 0) {
      has_config = nlohmann::json::parse(line.substr(10)) == c.resolved;
    }
  }
  CHECK(has_config);
  CHECK(line.rfind("time_s,mode_0_re,mode_0_im,", 0) == 0);

  const std::string green = slurp(a / "green.bin");
  REQUIRE(green.size() > 48);
  CHECK(green.substr(0, 8) == "RSQGREEN");
  const std::size_t n = g.n_points;
  CHECK(green.size() == 48 + 4 * (n * (n + 1) / 2) * 16);
  const std::string kern = slurp(a / "kernels.bin");
  CHECK(kern.substr(0, 8) == "RSQKERNL");
  CHECK(kern.size() == 48 + 2 * n * n * 16 + n * 8);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sweep output") {
  auto doc = with_energies(fig2(), {1.0, 10.0});
  doc["grid"] = {{"start_ps", -200.0}, {"end_ps", 2000.0}, {"points", 512}};
  const RunConfig c = parse_config(doc);
  const Device d = resolve_device(c);
  const TimeGrid g = resolve_grid(c, d);
  const SweepResult s = run_sweep(c, d, g);
  REQUIRE(s.complete);
  REQUIRE(s.runs.size() == 2);
  CHECK(*s.fidelity[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*s.fidelity[1] <= 1.0 + 1e-12);
  CHECK(s.runs[1].modes.modes[0].photons > s.runs[0].modes.modes[0].photons);

  const fs::path dir = scratch("sweep");
  write_sweep(dir, c, d, g, s);
  std::ifstream csv(dir / "sweep.csv");
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(csv, line)) {
    if (line.rfind("#", 0) != 0) rows.push_back(line);
  }
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "energy_pJ,n_mode_0,n_mode_1,n_mode_2,n_mode_3,n_mode_4,n_mode_5,n_mode_6,n_mode_7,n_mode_8,n_mode_9,"
        "v_squeezed_db,v_antisqueezed_db,v_anti_pure_db,schmidt_k,fidelity_vs_lowest_energy,pulse_fwhm_ns");
  CHECK(rows[1].rfind("1.000000000000e+00,", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("a failing sweep point keeps the earlier results") {
  auto doc = with_energies(fig2(), {1.0, 10.0, 1e6});
  doc["grid"] = {{"start_ps", -200.0}, {"end_ps", 2000.0}, {"points", 128}};
  doc["solver"] = {{"pump_tolerance", 1.0}};
  const RunConfig c = parse_config(doc);
  const Device d = resolve_device(c);
  const SweepResult s = run_sweep(c, d, resolve_grid(c, d));
  CHECK_FALSE(s.complete);
  REQUIRE(s.failure.has_value());
  CHECK(s.failed_energy == doctest::Approx(1e-6));
  CHECK(s.runs.size() == 2);
}

TEST_CASE("noise report from the configuration") {
  const RunConfig c = load_config(kConfigs / "noise_example.json");
  const NoiseReport r = noise_report(c, resolve_device(c));
  CHECK(r.snr == doctest::Approx(2.005).epsilon(0.01));
  CHECK(r.xi == 1e-14);
}
