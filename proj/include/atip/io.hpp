#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "atip/geometry.hpp"
#include "atip/powerlab.hpp"

namespace atip::io {

/// Writes content to path atomically (temp file in the same directory,
/// then rename) so interrupted runs leave no partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Formats a double with 6 significant digits (CSV default).
std::string format_g6(double v);

/// Reads a `position_cm,intensity` CSV (with header) into a trace.
powerlab::ScatterTrace read_scatter_trace_csv(const std::filesystem::path& path);

/// Device + material configuration, JSON with flat unit-suffixed keys.
struct DeviceConfig {
  geometry::DeviceDesign design;
  geometry::WaveguideCrossSection xsection;
  geometry::MaterialProperties material;
  geometry::MaskOptions mask_options;
  // Solver keys (thermal.tol_k, thermal.max_iter, thermal.relax).
  double thermal_tol_k = 0.01;
  int thermal_max_iter = 10000;
  double thermal_relax = 1.0;
};

/// Parses the JSON config; unknown keys are rejected.
DeviceConfig parse_device_config(const std::string& json_text);
DeviceConfig load_device_config(const std::filesystem::path& path);

/// FNV-1a content hash, for embedding in run summaries.
std::string content_hash(const std::string& data);

}  // namespace atip::io
