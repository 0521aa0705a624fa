#include "atip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atip::geometry {

void validate(const WaveguideCrossSection& xs) {
  if (xs.w_wg_um <= 0) throw std::invalid_argument("w_wg_um must be positive");
  if (xs.t_wg_nm <= 0) throw std::invalid_argument("t_wg_nm must be positive");
  if (xs.t_mem_nm <= 0) throw std::invalid_argument("t_mem_nm must be positive");
  if (xs.t_mem_nm >= xs.t_wg_nm)
    throw std::invalid_argument("t_mem_nm must be less than t_wg_nm (ridge structure)");
  if (xs.n_amb < 1.0) throw std::invalid_argument("n_amb must be >= 1");
  if (xs.n_core <= xs.n_amb) throw std::invalid_argument("n_core must exceed n_amb");
}

double DeviceDesign::span_um() const {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, InfinityDesign>)
          return d.hole_diameter_um;
        else
          return d.span_um;
      },
      variant);
}

std::string DeviceDesign::variant_name() const {
  if (std::holds_alternative<StraightDesign>(variant)) return "straight";
  if (std::holds_alternative<HybridNeedleDesign>(variant)) return "hybrid_needle";
  return "infinity";
}

const DeviceDesign& validate_design(const DeviceDesign& design) {
  const double span = design.span_um();
  if (span <= 0) throw std::invalid_argument("span must be positive");
  if (const auto* hn = std::get_if<HybridNeedleDesign>(&design.variant)) {
    if (hn->gap_um <= 0) throw std::invalid_argument("gap_um must be positive");
    if (hn->gap_um <= hn->span_um) throw std::invalid_argument("gap must exceed span");
  }
  if (design.window_edge_mm <= 0) throw std::invalid_argument("window_edge_mm must be positive");
  double largest = span;
  if (const auto* hn = std::get_if<HybridNeedleDesign>(&design.variant))
    largest = std::max(largest, hn->gap_um);
  if (design.window_edge_mm * 1000.0 < largest)
    throw std::invalid_argument("window edge must be at least the largest feature");
  return design;
}

void validate(const MaterialProperties& mat) {
  if (mat.k_w_per_mk <= 0) throw std::invalid_argument("k_w_per_mk must be positive");
  if (mat.alpha_db_per_cm < 0) throw std::invalid_argument("alpha_db_per_cm must be >= 0");
  if (mat.emissivity < 0 || mat.emissivity > 1)
    throw std::invalid_argument("emissivity must be in [0,1]");
  if (mat.t_fail_k <= mat.t_amb_k) throw std::invalid_argument("t_fail_k must exceed t_amb_k");
  if (mat.absorbed_fraction < 0 || mat.absorbed_fraction > 1)
    throw std::invalid_argument("absorbed_fraction must be in [0,1]");
}

namespace {

struct MaskBuilder {
  ThermalMask m;

  void init(double side_um, double cell_um) {
    int n = static_cast<int>(std::lround(side_um / cell_um));
    if (n % 2 == 0) ++n;  // odd cell count keeps a cell row centered on y = 0
    m.cell_um = cell_um;
    m.nx = m.ny = n;
    m.kind.assign(static_cast<std::size_t>(n) * n, CellKind::Membrane);
    m.thickness_nm.assign(static_cast<std::size_t>(n) * n, 0.0);
  }

  void set(int i, int j, CellKind k) { m.kind[static_cast<std::size_t>(i) * m.ny + j] = k; }
  CellKind get(int i, int j) const { return m.kind[static_cast<std::size_t>(i) * m.ny + j]; }
};

}  // namespace

ThermalMask rasterize_mask(const DeviceDesign& design, const WaveguideCrossSection& xs,
                           double cell_um, const MaskOptions& opt) {
  validate_design(design);
  validate(xs);
  const double span = design.span_um();
  if (cell_um <= 0) throw std::invalid_argument("cell size must be positive");
  if (cell_um > span / 20.0) throw std::invalid_argument("cell too coarse: need cell <= span/20");

  const double side = std::max(4.0 * span, 1000.0);
  if (side > design.window_edge_mm * 1000.0)
    throw std::invalid_argument("feature exceeds window");

  MaskBuilder b;
  b.init(side, cell_um);
  ThermalMask& m = b.m;
  const int n = m.nx;
  const int mid = (n - 1) / 2;

  auto in_circle = [](double x, double y, double cx, double cy, double r) {
    const double dx = x - cx, dy = y - cy;
    return dx * dx + dy * dy <= r * r;
  };

  if (const auto* st = std::get_if<StraightDesign>(&design.variant)) {
    // Outside the membrane hole the film is silicon-backed and heat-sunk;
    // the path meets SiliconContact one span apart.
    const double r = st->span_um / 2.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = m.x_um(i), y = m.y_um(j);
        if (!in_circle(x, y, 0, 0, r))
          b.set(i, j, CellKind::SiliconContact);
        else if (std::abs(y) > opt.w_strip_um / 2.0)
          b.set(i, j, CellKind::Hole);
      }
  } else if (const auto* inf = std::get_if<InfinityDesign>(&design.variant)) {
    const double r = inf->hole_diameter_um / 2.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = m.x_um(i), y = m.y_um(j);
        const bool hole = in_circle(x, y, 0, r, r) || in_circle(x, y, 0, -r, r);
        if (hole && std::abs(y) > opt.w_strip_um / 2.0) b.set(i, j, CellKind::Hole);
      }
  } else {
    const auto& hn = std::get<HybridNeedleDesign>(design.variant);
    const double half_span = hn.span_um / 2.0;
    const double half_gap = hn.gap_um / 2.0;
    const double needle_half_width = opt.w_taper_um / 2.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = m.x_um(i), y = m.y_um(j);
        const double ax = std::abs(x);
        if (ax >= half_gap) {
          b.set(i, j, std::abs(y) <= needle_half_width ? CellKind::SiliconContact
                                                       : CellKind::Hole);
          continue;
        }
        double w;  // local membrane half-width
        if (ax <= half_span) {
          w = opt.w_strip_um / 2.0;
        } else {
          const double f = (ax - half_span) / (half_gap - half_span);  // 0 at span end, 1 at tip
          w = 0.5 * (opt.w_strip_um + (opt.w_taper_um - opt.w_strip_um) * f);
        }
        b.set(i, j, std::abs(y) <= w ? CellKind::Membrane : CellKind::Hole);
      }
  }

  // Domain clip boundary is heat-sunk silicon.
  for (int i = 0; i < n; ++i) {
    b.set(i, 0, CellKind::SiliconContact);
    b.set(i, n - 1, CellKind::SiliconContact);
    b.set(0, i, CellKind::SiliconContact);
    b.set(n - 1, i, CellKind::SiliconContact);
  }

  // Waveguide path: the row through y = 0, Ridge over membrane cells.
  m.path.clear();
  for (int i = 0; i < n; ++i) {
    const CellKind k = b.get(i, mid);
    if (k == CellKind::Hole)
      throw std::logic_error("waveguide path crosses a hole cell");
    if (k == CellKind::Membrane) b.set(i, mid, CellKind::Ridge);
    m.path.push_back(i * n + mid);
  }

  m.w_wg_um = xs.w_wg_um;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      switch (b.get(i, j)) {
        case CellKind::Ridge: m.thickness_nm[static_cast<std::size_t>(i) * n + j] = xs.t_wg_nm; break;
        case CellKind::Membrane: m.thickness_nm[static_cast<std::size_t>(i) * n + j] = xs.t_mem_nm; break;
        default: break;
      }
    }
  return m;
}

}  // namespace atip::geometry
