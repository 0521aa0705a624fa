#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace atip::geometry {

/// Ridge membrane waveguide cross-section: a ridge of thickness t_wg_nm and
/// width w_wg_um sitting on a thinner membrane of thickness t_mem_nm.
struct WaveguideCrossSection {
  double w_wg_um = 1.6;
  double t_wg_nm = 100.0;
  double t_mem_nm = 50.0;
  double n_core = 1.76;
  double n_amb = 1.0;
};

/// Throws std::invalid_argument naming the violated field.
void validate(const WaveguideCrossSection& xs);

struct StraightDesign {
  double span_um = 500.0;  // diameter of the membrane hole the strip bridges
};

struct HybridNeedleDesign {
  double span_um = 250.0;  // length of the uniform-width central strip
  double gap_um = 460.0;   // tip-to-tip distance between the silicon needles
};

struct InfinityDesign {
  double hole_diameter_um = 125.0;
};

struct DeviceDesign {
  std::variant<StraightDesign, HybridNeedleDesign, InfinityDesign> variant;
  double window_edge_mm = 6.0;

  /// Suspended length as the paper defines it for each variant.
  double span_um() const;
  std::string variant_name() const;
};

/// Returns the design unchanged if all invariants hold; throws
/// std::invalid_argument naming the first violated invariant otherwise.
const DeviceDesign& validate_design(const DeviceDesign& design);

struct MaterialProperties {
  double k_w_per_mk = 1.0;       // in-plane thermal conductivity
  double alpha_db_per_cm = 1.0;  // propagation loss
  double emissivity = 0.05;      // gray-body, per side
  double t_fail_k = 2354.0;      // alumina melting point
  double t_amb_k = 300.0;
  double absorbed_fraction = 1.0;  // fraction of propagation loss turned to heat
};

void validate(const MaterialProperties& mat);

enum class CellKind : std::uint8_t { Hole, Membrane, Ridge, SiliconContact };

/// Plan-view rasterization of a device for the thermal solver. Square cells;
/// x runs along the waveguide, y transverse. The waveguide path is the ordered
/// list of cells along y = 0 between the two silicon contact regions.
struct ThermalMask {
  double cell_um = 5.0;
  int nx = 0;
  int ny = 0;
  std::vector<CellKind> kind;       // nx*ny, row-major (i*ny + j)
  std::vector<double> thickness_nm;  // per cell sheet thickness
  std::vector<int> path;            // flat indices of waveguide cells, ordered in +x
  double w_wg_um = 1.6;

  CellKind at(int i, int j) const { return kind[static_cast<std::size_t>(i) * ny + j]; }
  double thickness_at(int i, int j) const {
    return thickness_nm[static_cast<std::size_t>(i) * ny + j];
  }
  double x_um(int i) const { return (i - (nx - 1) / 2) * cell_um; }
  double y_um(int j) const { return (j - (ny - 1) / 2) * cell_um; }
};

/// Rasterization tuning knobs the paper does not dimension.
struct MaskOptions {
  double w_strip_um = 10.0;   // membrane wing width flanking the waveguide
  double w_taper_um = 100.0;  // membrane width at the needle tips (hybrid needle)
};

/// Rasterizes a validated design onto a square grid of side
/// max(4*span, 1 mm), clipped with SiliconContact at the boundary.
/// Cell kinds are assigned by cell-center sampling.
ThermalMask rasterize_mask(const DeviceDesign& design, const WaveguideCrossSection& xs,
                           double cell_um, const MaskOptions& opt = {});

}  // namespace atip::geometry
