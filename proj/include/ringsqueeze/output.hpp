#pragma once

// Report files. Every file carries the format version and the resolved
// configuration, and is written deterministically (no timestamps, fixed
// number formatting), so repeating a run reproduces it byte for byte.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "ringsqueeze/error.hpp"
#include "ringsqueeze/pipeline.hpp"

namespace ringsqueeze {

inline constexpr const char* kOutputFormat = "ringsqueeze-output/1";

nlohmann::json device_json(const RunConfig& config, const Device& device, const TimeGrid& grid);
nlohmann::json run_json(const RunResult& run);
nlohmann::json noise_json(const RunConfig& config, const NoiseReport& report);
nlohmann::json phase_match_json(const RunConfig& config, const Device& device);
nlohmann::json error_json(const Error& error);

/// report.json, modes.csv and the optional binary dumps.
void write_simulation(const std::filesystem::path& dir, const RunConfig& config, const Device& device,
                      const RunResult& run);

/// sweep.csv and modes.csv (dominant profile per energy).
void write_sweep(const std::filesystem::path& dir, const RunConfig& config, const Device& device,
                 const TimeGrid& grid, const SweepResult& sweep);

/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// Binary dumps, little-endian. Header: 8-byte magic ("RSQGREEN" or
/// "RSQKERNL"), u32 version (1), u32 reserved (0), u64 n_points, f64 t_start,
/// f64 t_end, f64 gamma_total (Green) or 0 (kernels). Payload of complex
/// values as (re, im) f64 pairs:
///   Green:   G11, G12, G21, G22, each over j >= k in row-major order
///            (entry (j, k) at j(j+1)/2 + k);
///   kernels: N then M, each n x n row-major, then the n weights as f64.
void dump_green(const std::filesystem::path& path, const GreenTable& green);
void dump_kernels(const std::filesystem::path& path, const MomentKernels& kernels);

}  // namespace ringsqueeze
