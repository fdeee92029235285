// Command-line front end: simulate, sweep, phase-match, noise.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ringsqueeze/config.hpp"
#include "ringsqueeze/error.hpp"
#include "ringsqueeze/output.hpp"
#include "ringsqueeze/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ringsqueeze;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string energies;
};

// Reports an error on stderr and, when an output directory is known, as error.json.
int report_error(const Error& error, const std::string& out) {
  const nlohmann::json record = error_json(error);
  std::cerr << record.dump() << "\n";
  if (!out.empty()) {
    try {
      fs::create_directories(out);
      write_json(fs::path(out) / "error.json", record);
    } catch (const std::exception&) {
      // stderr already carries the record
    }
  }
  return error.exit_code();
}

int cmd_simulate(const Options& o) {
  const RunConfig config = load_config(o.config);
  if (config.pulse.energies.size() != 1) {
    throw Error(ErrorKind::kConfig, "configuration", "simulate takes a single pulse energy; use sweep for a list");
  }
  const Device device = resolve_device(config);
  const TimeGrid grid = resolve_grid(config, device);
  const RunResult run = run_single(config, device, grid, config.pulse.energies.front());
  write_simulation(o.out, config, device, run);
  return 0;
}

int cmd_sweep(const Options& o) {
  nlohmann::json document = read_json(o.config);
  if (!o.energies.empty()) document = with_energies(document, parse_energy_list(o.energies));
  const RunConfig config = parse_config(document);
  if (config.pulse.shape != PulseShape::kGaussian) {
    throw Error(ErrorKind::kConfig, "configuration", "sweep needs a gaussian pulse");
  }
  if (config.pulse.energies.size() < 2) {
    throw Error(ErrorKind::kConfig, "configuration", "sweep needs at least two energies");
  }
  const Device device = resolve_device(config);
  const TimeGrid grid = resolve_grid(config, device);
  const SweepResult sweep = run_sweep(config, device, grid);
  write_sweep(o.out, config, device, grid, sweep);
  if (sweep.failure) throw *sweep.failure;
  return 0;
}

void emit(const nlohmann::json& value, const std::string& out, const std::string& name) {
  std::cout << value.dump(2) << "\n";
  if (!out.empty()) {
    fs::create_directories(out);
    write_json(fs::path(out) / name, value);
  }
}

int cmd_phase_match(const Options& o) {
  const RunConfig config = load_config(o.config);
  const Device device = resolve_device(config);
  emit(phase_match_json(config, device), o.out, "phase_match.json");
  return 0;
}

int cmd_noise(const Options& o) {
  const RunConfig config = load_config(o.config);
  const Device device = resolve_device(config);
  emit(noise_json(config, noise_report(config, device)), o.out, "noise.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed squeezed-light simulation for driven microring resonators"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "single pulse energy: report.json and modes.csv");
  simulate->add_option("--config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", o.out, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "energy sweep: sweep.csv and modes.csv");
  sweep->add_option("--config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  sweep->add_option("--energies", o.energies, "pJ list \"1,10,100\" or \"log:min,max,n\"");
  sweep->add_option("--out", o.out, "output directory")->required();

  auto* phase = app.add_subcommand("phase-match", "drive power and SPM/XPM phase-matching report");
  phase->add_option("--config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  phase->add_option("--out", o.out, "also write phase_match.json here");

  auto* noise = app.add_subcommand("noise", "spurious four-wave-mixing noise budget");
  noise->add_option("--config", o.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  noise->add_option("--out", o.out, "also write noise.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::kConfig);
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (phase->parsed()) return cmd_phase_match(o);
    return cmd_noise(o);
  } catch (const Error& e) {
    return report_error(e, o.out);
  } catch (const std::bad_alloc&) {
    return report_error(Error(ErrorKind::kSolver, "out-of-memory", "out of memory; reduce grid.points"), o.out);
  } catch (const std::exception& e) {
    return report_error(Error(ErrorKind::kConfig, "io", e.what()), o.out);
  }
}
