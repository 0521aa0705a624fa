#include "atip/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace atip::io {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

powerlab::ScatterTrace read_scatter_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  powerlab::ScatterTrace trace;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("position_cm") != std::string::npos) continue;  // header
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed trace line: " + line);
    trace.samples.push_back(
        {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  powerlab::validate(trace);
  return trace;
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "variant",          "span_um",         "gap_um",       "hole_diameter_um",
    "window_edge_mm",   "w_wg_um",         "t_wg_nm",      "t_mem_nm",
    "n_core",           "n_amb",           "k_w_per_mk",   "alpha_db_per_cm",
    "emissivity",       "t_fail_k",        "t_amb_k",      "absorbed_fraction",
    "w_strip_um",       "w_taper_um",      "thermal"};

}  // namespace

DeviceConfig parse_device_config(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
      throw std::runtime_error("unknown config key: " + key);
  }
  DeviceConfig cfg;
  const std::string variant = j.value("variant", "infinity");
  if (variant == "straight") {
    cfg.design.variant = geometry::StraightDesign{j.value("span_um", 500.0)};
  } else if (variant == "hybrid_needle") {
    cfg.design.variant =
        geometry::HybridNeedleDesign{j.value("span_um", 250.0), j.value("gap_um", 460.0)};
  } else if (variant == "infinity") {
    cfg.design.variant = geometry::InfinityDesign{j.value("hole_diameter_um", 125.0)};
  } else {
    throw std::runtime_error("unknown variant: " + variant);
  }
  cfg.design.window_edge_mm = j.value("window_edge_mm", 6.0);
  cfg.xsection.w_wg_um = j.value("w_wg_um", cfg.xsection.w_wg_um);
  cfg.xsection.t_wg_nm = j.value("t_wg_nm", cfg.xsection.t_wg_nm);
  cfg.xsection.t_mem_nm = j.value("t_mem_nm", cfg.xsection.t_mem_nm);
  cfg.xsection.n_core = j.value("n_core", cfg.xsection.n_core);
  cfg.xsection.n_amb = j.value("n_amb", cfg.xsection.n_amb);
  cfg.material.k_w_per_mk = j.value("k_w_per_mk", cfg.material.k_w_per_mk);
  cfg.material.alpha_db_per_cm = j.value("alpha_db_per_cm", cfg.material.alpha_db_per_cm);
  cfg.material.emissivity = j.value("emissivity", cfg.material.emissivity);
  cfg.material.t_fail_k = j.value("t_fail_k", cfg.material.t_fail_k);
  cfg.material.t_amb_k = j.value("t_amb_k", cfg.material.t_amb_k);
  cfg.material.absorbed_fraction = j.value("absorbed_fraction", cfg.material.absorbed_fraction);
  cfg.mask_options.w_strip_um = j.value("w_strip_um", cfg.mask_options.w_strip_um);
  cfg.mask_options.w_taper_um = j.value("w_taper_um", cfg.mask_options.w_taper_um);
  if (j.contains("thermal")) {
    const auto& t = j.at("thermal");
    for (const auto& [key, value] : t.items()) {
      if (key != "tol_k" && key != "max_iter" && key != "relax")
        throw std::runtime_error("unknown config key: thermal." + key);
    }
    cfg.thermal_tol_k = t.value("tol_k", cfg.thermal_tol_k);
    cfg.thermal_max_iter = t.value("max_iter", cfg.thermal_max_iter);
    cfg.thermal_relax = t.value("relax", cfg.thermal_relax);
  }
  geometry::validate_design(cfg.design);
  geometry::validate(cfg.xsection);
  geometry::validate(cfg.material);
  return cfg;
}

DeviceConfig load_device_config(const std::filesystem::path& path) {
  return parse_device_config(read_file(path));
}

std::string content_hash(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace atip::io
