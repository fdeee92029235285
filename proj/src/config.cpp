#include "ringsqueeze/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ringsqueeze/error.hpp"

namespace ringsqueeze {

namespace {

Error config_error(const std::string& what) { return Error(ErrorKind::kConfig, "config", what); }

// One JSON object being read. Every key that is looked at becomes known;
// finish() rejects the rest. Defaults are written back into the node so the
// resolved document records them.
class Block {
 public:
  Block(nlohmann::json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw config_error(path_ + " must be an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return node_.contains(key);
  }

  double number(const std::string& key) {
    if (!has(key)) throw config_error(where(key) + " is required");
    return to_number(key);
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return to_number(key);
  }

  double number_or(const std::string& key, double fallback) {
    if (!has(key)) node_[key] = fallback;
    return to_number(key);
  }

  std::size_t count_or(const std::string& key, std::size_t fallback) {
    if (!has(key)) node_[key] = fallback;
    const auto& v = node_[key];
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw config_error(where(key) + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  bool flag_or(const std::string& key, bool fallback) {
    if (!has(key)) node_[key] = fallback;
    const auto& v = node_[key];
    if (!v.is_boolean()) throw config_error(where(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) node_[key] = fallback;
    const auto& v = node_[key];
    if (!v.is_string()) throw config_error(where(key) + " must be a string");
    return v.get<std::string>();
  }

  nlohmann::json& value(const std::string& key) {
    if (!has(key)) throw config_error(where(key) + " is required");
    return node_[key];
  }

  nlohmann::json& child(const std::string& key) {
    if (!has(key)) node_[key] = nlohmann::json::object();
    return node_[key];
  }

  /// At most one of `keys` may be present; returns its index or -1.
  int choice(std::initializer_list<const char*> keys) {
    int found = -1;
    int i = 0;
    std::string names;
    for (const char* k : keys) {
      names += (names.empty() ? "" : ", ") + std::string(k);
      if (has(k)) {
        if (found >= 0) throw config_error(path_ + ": give only one of " + names);
        found = i;
      }
      ++i;
    }
    return found;
  }

  int required_choice(std::initializer_list<const char*> keys) {
    const int found = choice(keys);
    if (found < 0) {
      std::string names;
      for (const char* k : keys) names += (names.empty() ? "" : ", ") + std::string(k);
      throw config_error(path_ + ": one of " + names + " is required");
    }
    return found;
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!known_.count(item.key())) throw config_error("unknown key " + where(item.key()));
    }
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  double to_number(const std::string& key) {
    const auto& v = node_[key];
    if (!v.is_number()) throw config_error(where(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw config_error(where(key) + " must be finite");
    return x;
  }

  nlohmann::json& node_;
  std::string path_;
  std::set<std::string> known_;
};

ResonatorSpec parse_resonator(Block& b) {
  ResonatorSpec r;
  r.round_trip_length = b.number("round_trip_length_um") * 1e-6;
  const int vg = b.required_choice({"group_index", "group_velocity_m_per_s"});
  if (vg == 0) {
    r.group_index = b.number("group_index");
  } else {
    r.group_velocity = b.number("group_velocity_m_per_s");
  }
  r.gamma_nl = b.number("gamma_nl_per_W_per_m");
  r.effective_index = b.optional_number("effective_index");
  if (auto radius = b.optional_number("ring_radius_um")) r.ring_radius = *radius * 1e-6;
  b.finish();
  try {
    r.validate();
  } catch (const Error& e) {
    throw config_error("resonator: " + std::string(e.what()));
  }
  return r;
}

ModeSpec parse_mode(Block& b, ModeLabel label) {
  ModeSpec m;
  m.label = label;
  switch (b.required_choice({"frequency_THz", "frequency_Hz", "omega_rad_per_s"})) {
    case 0: m.omega = constants::two_pi * b.number("frequency_THz") * 1e12; break;
    case 1: m.omega = constants::two_pi * b.number("frequency_Hz"); break;
    default: m.omega = b.number("omega_rad_per_s"); break;
  }
  m.q_intrinsic = b.number("q_intrinsic");
  m.escape_efficiency = b.number("escape_efficiency");
  m.q_loaded = b.optional_number("q_loaded");
  b.finish();
  try {
    derive_rates(m);
  } catch (const Error& e) {
    throw config_error("modes." + to_string(label) + ": " + e.what());
  }
  return m;
}

DriveSettings parse_drive(Block& b) {
  DriveSettings d;
  if (b.choice({"power_mW", "auto_phase_match"}) == 0) {
    d.power = b.number("power_mW") * 1e-3;
    if (!(*d.power >= 0.0)) throw config_error("drive.power_mW must be >= 0");
  } else {
    d.auto_phase_match = b.flag_or("auto_phase_match", false);
    if (!d.auto_phase_match) throw config_error("drive: give power_mW or set auto_phase_match");
  }
  const int detuning = b.choice({"delta_net_rad_per_s", "delta_res_rad_per_s"});
  if (detuning == 1) {
    d.delta_res = b.number("delta_res_rad_per_s");
  } else {
    d.delta_net = b.number_or("delta_net_rad_per_s", 0.0);
  }
  if (d.auto_phase_match && !d.delta_res) {
    throw config_error("drive.auto_phase_match needs delta_res_rad_per_s");
  }
  b.finish();
  return d;
}

PulseSettings parse_pulse(Block& b) {
  PulseSettings p;
  const std::string shape = b.text_or("shape", "gaussian");
  if (shape == "gaussian") {
    p.shape = PulseShape::kGaussian;
  } else if (shape == "samples") {
    p.shape = PulseShape::kSamples;
  } else {
    throw config_error("pulse.shape must be \"gaussian\" or \"samples\"");
  }

  if (p.shape == PulseShape::kGaussian) {
    if (b.required_choice({"energy_pJ", "energies_pJ"}) == 0) {
      p.energies.push_back(b.number("energy_pJ") * 1e-12);
    } else {
      const auto& list = b.value("energies_pJ");
      if (!list.is_array() || list.empty()) throw config_error("pulse.energies_pJ must be a non-empty array");
      for (const auto& e : list) {
        if (!e.is_number()) throw config_error("pulse.energies_pJ entries must be numbers");
        p.energies.push_back(e.get<double>() * 1e-12);
      }
    }
    for (double e : p.energies) {
      if (!(e >= 0.0) || !std::isfinite(e)) throw config_error("pulse energies must be >= 0");
    }
    std::vector<double> sorted = p.energies;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != p.energies || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw config_error("pulse energies must be strictly increasing");
    }
  } else {
    const auto& data = b.value("samples_sqrt_photons_per_m");
    if (!data.is_array() || data.size() < 16) {
      throw config_error("pulse.samples_sqrt_photons_per_m must hold at least 16 [re, im] pairs");
    }
    for (const auto& pair : data) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        throw config_error("pulse.samples_sqrt_photons_per_m entries must be [re, im]");
      }
      p.samples.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    p.sample_start = b.number("sample_start_ps") * 1e-12;
    p.sample_step = b.number("sample_step_ps") * 1e-12;
    if (!(p.sample_step > 0.0)) throw config_error("pulse.sample_step_ps must be > 0");
  }

  if (b.choice({"fwhm_ps", "fwhm_relative_to_dwell"}) == 0) {
    p.fwhm = b.number("fwhm_ps") * 1e-12;
    if (!(*p.fwhm > 0.0)) throw config_error("pulse.fwhm_ps must be > 0");
  } else {
    p.fwhm_relative = b.number_or("fwhm_relative_to_dwell", 0.1);
    if (!(p.fwhm_relative > 0.0)) throw config_error("pulse.fwhm_relative_to_dwell must be > 0");
  }
  p.center = b.number_or("center_ps", 0.0) * 1e-12;
  const std::string dwell = b.text_or("dwell_convention", "inverse_total_rate");
  if (dwell == "inverse_total_rate") {
    p.dwell = DwellConvention::kInverseTotal;
  } else if (dwell == "half_inverse_total_rate") {
    p.dwell = DwellConvention::kHalfInverseTotal;
  } else {
    throw config_error("pulse.dwell_convention must be \"inverse_total_rate\" or \"half_inverse_total_rate\"");
  }
  b.finish();
  return p;
}

GridSettings parse_grid(Block& b) {
  GridSettings g;
  const bool explicit_span = b.has("start_ps") || b.has("end_ps") || b.has("points");
  g.automatic = b.flag_or("auto", !explicit_span);
  if (g.automatic == explicit_span) {
    throw config_error("grid: set auto, or give start_ps, end_ps and points (not both)");
  }
  if (!g.automatic) {
    g.start = b.number("start_ps") * 1e-12;
    g.end = b.number("end_ps") * 1e-12;
    g.points = b.count_or("points", 0);
    if (!(g.end > g.start)) throw config_error("grid.end_ps must exceed grid.start_ps");
    if (g.points < 16) throw config_error("grid.points must be at least 16");
  }
  g.allow_large = b.flag_or("allow_large", false);
  b.finish();
  return g;
}

SolverSettings parse_solver(Block& b) {
  SolverSettings s;
  s.pump_tolerance = b.number_or("pump_tolerance", s.pump_tolerance);
  s.su11_tolerance = b.number_or("su11_tolerance", s.su11_tolerance);
  s.mode_count = b.count_or("mode_count", s.mode_count);
  s.takagi_check = b.flag_or("takagi_check", s.takagi_check);
  if (!(s.pump_tolerance > 0.0) || !(s.su11_tolerance > 0.0)) {
    throw config_error("solver tolerances must be > 0");
  }
  if (s.mode_count < 2) throw config_error("solver.mode_count must be at least 2");
  b.finish();
  return s;
}

ModeLabel parse_label(const std::string& text, const std::string& where) {
  if (text == "drive") return ModeLabel::kDrive;
  if (text == "signal") return ModeLabel::kSignal;
  if (text == "pump") return ModeLabel::kPump;
  throw config_error(where + " must be \"drive\", \"signal\" or \"pump\"");
}

NoiseSettings parse_noise(Block& b) {
  NoiseSettings n;
  n.pump_power = b.number_or("pump_power_mW", 1.0) * 1e-3;
  n.q_loaded = b.optional_number("q_loaded");
  n.xi = b.optional_number("xi_m_per_W");
  n.linewidth_mode = parse_label(b.text_or("linewidth_mode", "signal"), b.where("linewidth_mode"));
  if (!(n.pump_power > 0.0)) throw config_error("noise.pump_power_mW must be > 0");
  if (n.q_loaded && !(*n.q_loaded > 0.0)) throw config_error("noise.q_loaded must be > 0");
  if (n.xi && !(*n.xi > 0.0)) throw config_error("noise.xi_m_per_W must be > 0");
  b.finish();
  return n;
}

OutputSettings parse_output(Block& b) {
  OutputSettings o;
  o.dump_green = b.flag_or("dump_green", false);
  o.dump_kernels = b.flag_or("dump_kernels", false);
  b.finish();
  return o;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& document) {
  RunConfig cfg;
  cfg.resolved = document;
  Block root(cfg.resolved, "config");
  const std::string format = root.text_or("format_version", kConfigFormat);
  if (format != kConfigFormat) throw config_error("unsupported format_version \"" + format + "\"");

  {
    Block b(root.value("resonator"), "resonator");
    cfg.resonator = parse_resonator(b);
  }
  {
    Block modes(root.value("modes"), "modes");
    Block d(modes.value("drive"), "modes.drive");
    cfg.drive_mode = parse_mode(d, ModeLabel::kDrive);
    Block s(modes.value("signal"), "modes.signal");
    cfg.signal_mode = parse_mode(s, ModeLabel::kSignal);
    Block p(modes.value("pump"), "modes.pump");
    cfg.pump_mode = parse_mode(p, ModeLabel::kPump);
    modes.finish();
  }
  {
    Block b(root.value("drive"), "drive");
    cfg.drive = parse_drive(b);
  }
  {
    Block b(root.value("pulse"), "pulse");
    cfg.pulse = parse_pulse(b);
  }
  {
    Block b(root.child("grid"), "grid");
    cfg.grid = parse_grid(b);
  }
  {
    Block b(root.child("solver"), "solver");
    cfg.solver = parse_solver(b);
  }
  {
    Block b(root.child("noise"), "noise");
    cfg.noise = parse_noise(b);
  }
  {
    Block b(root.child("output"), "output");
    cfg.output = parse_output(b);
  }
  root.finish();
  return cfg;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path.string() + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json(path)); }

nlohmann::json with_energies(nlohmann::json document, const std::vector<double>& energies_pj) {
  if (!document.is_object() || !document.contains("pulse") || !document["pulse"].is_object()) {
    throw config_error("config has no pulse block");
  }
  auto& pulse = document["pulse"];
  pulse.erase("energy_pJ");
  pulse["energies_pJ"] = energies_pj;
  return document;
}

std::vector<double> parse_energy_list(const std::string& text) {
  auto parse_number = [&](const std::string& item) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x)) {
      throw config_error("bad number \"" + item + "\" in energy list \"" + text + "\"");
    }
    return x;
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) parts.push_back(item);
    return parts;
  };

  std::vector<double> out;
  if (text.rfind("log:", 0) == 0) {
    const auto parts = split(text.substr(4));
    if (parts.size() != 3) throw config_error("log energy list must be log:min,max,n");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (!(lo > 0.0) || !(hi > lo) || count < 2 || count != std::floor(count)) {
      throw config_error("log energy list needs 0 < min < max and integer n >= 2");
    }
    const auto n = static_cast<std::size_t>(count);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(lo * std::exp(step * static_cast<double>(i)));
    out.back() = hi;
  } else {
    for (const auto& item : split(text)) out.push_back(parse_number(item));
  }
  if (out.empty()) throw config_error("empty energy list");
  return out;
}

}  // namespace ringsqueeze
