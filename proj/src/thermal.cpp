#include "atip/thermal.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "atip/constants.hpp"

namespace atip::thermal {

namespace constants = atip::constants;
using geometry::CellKind;

namespace {

struct System {
  const geometry::ThermalMask* mask;
  std::vector<int> cell_to_unknown;  // -1 for Hole/Contact
  std::vector<int> unknown_to_cell;
  std::vector<double> source_w;      // per unknown
  std::vector<double> contact_g;     // conductance to heat sink, per unknown
  double area_m2 = 0.0;
};

System build_system(const geometry::ThermalMask& mask, const geometry::MaterialProperties& mat,
                    double p_wg_mw) {
  System sys;
  sys.mask = &mask;
  const int nx = mask.nx, ny = mask.ny;
  const double c = mask.cell_um * 1e-6;
  sys.area_m2 = c * c;
  sys.cell_to_unknown.assign(static_cast<std::size_t>(nx) * ny, -1);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const CellKind k = mask.at(i, j);
      if (k == CellKind::Membrane || k == CellKind::Ridge) {
        sys.cell_to_unknown[static_cast<std::size_t>(i) * ny + j] =
            static_cast<int>(sys.unknown_to_cell.size());
        sys.unknown_to_cell.push_back(i * ny + j);
      }
    }
  sys.source_w.assign(sys.unknown_to_cell.size(), 0.0);
  sys.contact_g.assign(sys.unknown_to_cell.size(), 0.0);

  // Distributed absorption along the waveguide path, decaying from the
  // first suspended cell. Each path cell's power is smeared over a fixed
  // transverse footprint; a source confined to one grid row would make the
  // peak temperature diverge logarithmically under mesh refinement.
  const double alpha_lin = mat.alpha_db_per_cm * std::log(10.0) / 10.0 * 100.0;  // 1/m
  const double p0 = p_wg_mw * 1e-3;
  const double half_fp = 0.5 * kSourceFootprintUm * 1e-6;
  double s = 0.0;
  for (int cell : mask.path) {
    const int u = sys.cell_to_unknown[cell];
    if (u < 0) continue;  // heat deposited on silicon is sunk immediately
    const double dp = mat.absorbed_fraction * p0 * std::exp(-alpha_lin * s) *
                      (1.0 - std::exp(-alpha_lin * c));
    s += c;
    const int i = cell / ny, j = cell % ny;
    std::vector<std::pair<int, double>> weights;  // (unknown, overlap length)
    double total = 0.0;
    const int reach = static_cast<int>(half_fp / c) + 1;
    for (int dj = -reach; dj <= reach; ++dj) {
      const int jj = j + dj;
      if (jj < 0 || jj >= ny) continue;
      const int v = sys.cell_to_unknown[static_cast<std::size_t>(i) * ny + jj];
      if (v < 0) continue;
      const double lo = std::max(dj * c - 0.5 * c, -half_fp);
      const double hi = std::min(dj * c + 0.5 * c, half_fp);
      if (hi <= lo) continue;
      weights.emplace_back(v, hi - lo);
      total += hi - lo;
    }
    if (weights.empty() || total <= 0.0) {
      sys.source_w[u] += dp;
    } else {
      for (auto [v, w] : weights) sys.source_w[v] += dp * w / total;
    }
  }

  // Face conductances into Dirichlet (contact) neighbors.
  const auto neighbor_dirs = {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}};
  for (std::size_t u = 0; u < sys.unknown_to_cell.size(); ++u) {
    const int i = sys.unknown_to_cell[u] / ny;
    const int j = sys.unknown_to_cell[u] % ny;
    for (auto [di, dj] : neighbor_dirs) {
      const int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      if (mask.at(ii, jj) == CellKind::SiliconContact)
        sys.contact_g[u] += mat.k_w_per_mk * mask.thickness_at(i, j) * 1e-9;
    }
  }
  return sys;
}

}  // namespace

ThermalField steady_state_temperature(const geometry::ThermalMask& mask,
                                      const geometry::MaterialProperties& mat,
                                      double p_wg_mw, const SolverOptions& opt) {
  geometry::validate(mat);
  if (p_wg_mw < 0) throw std::invalid_argument("p_wg_mw must be >= 0");
  if (opt.relax <= 0 || opt.relax > 1) throw std::invalid_argument("relax must be in (0, 1]");

  const int nx = mask.nx, ny = mask.ny;
  const System sys = build_system(mask, mat, p_wg_mw);
  const int n = static_cast<int>(sys.unknown_to_cell.size());
  if (n == 0) throw std::invalid_argument("mask has no conducting cells");
  const double t_amb = mat.t_amb_k;
  const double two_eps_sigma = 2.0 * mat.emissivity * constants::sigma_sb;

  // Constant conduction stencil; only the radiation diagonal changes per
  // Newton step.
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  std::vector<double> diag_const(n, 0.0);
  const auto neighbor_dirs = {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}};
  for (int u = 0; u < n; ++u) {
    const int i = sys.unknown_to_cell[u] / ny;
    const int j = sys.unknown_to_cell[u] % ny;
    const double ti = mask.thickness_at(i, j);
    for (auto [di, dj] : neighbor_dirs) {
      const int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      const int v = sys.cell_to_unknown[static_cast<std::size_t>(ii) * ny + jj];
      if (v < 0) continue;
      const double tj = mask.thickness_at(ii, jj);
      const double g = mat.k_w_per_mk * (2.0 * ti * tj / (ti + tj)) * 1e-9;
      diag_const[u] += g;
      trips.emplace_back(u, v, -g);
    }
    diag_const[u] += sys.contact_g[u];
  }
  for (int u = 0; u < n; ++u) trips.emplace_back(u, u, diag_const[u]);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(a);

  Eigen::VectorXd t = Eigen::VectorXd::Constant(n, t_amb);
  double residual = 0.0;
  double prev_residual = std::numeric_limits<double>::infinity();
  int grow_streak = 0;
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iter; ++it) {
    // Newton linearization of the radiation term around the current state.
    Eigen::VectorXd b(n);
    for (int u = 0; u < n; ++u) {
      const double tc = t[u];
      const double rad_slope =
          opt.radiation ? 4.0 * two_eps_sigma * tc * tc * tc * sys.area_m2 : 0.0;
      a.coeffRef(u, u) = diag_const[u] + rad_slope;
      const double rad = opt.radiation ? two_eps_sigma * (tc * tc * tc * tc - t_amb * t_amb * t_amb * t_amb) * sys.area_m2
                                       : 0.0;
      b[u] = sys.source_w[u] + sys.contact_g[u] * t_amb - rad + rad_slope * tc;
    }
    solver.factorize(a);
    if (solver.info() != Eigen::Success) throw std::runtime_error("thermal: factorization failed");
    const Eigen::VectorXd t_new = solver.solve(b);
    residual = (t_new - t).cwiseAbs().maxCoeff();
    t += opt.relax * (t_new - t);
    if (residual < opt.tol_k) {
      converged = true;
      ++it;
      break;
    }
    if (residual > prev_residual) {
      if (++grow_streak >= 50) throw std::runtime_error("diverged");
    } else {
      grow_streak = 0;
    }
    prev_residual = residual;
  }
  if (!converged) throw std::runtime_error("not converged");

  ThermalField field;
  field.nx = nx;
  field.ny = ny;
  field.cell_um = mask.cell_um;
  field.t_k.assign(static_cast<std::size_t>(nx) * ny, t_amb);
  for (int u = 0; u < n; ++u) field.t_k[sys.unknown_to_cell[u]] = t[u];
  field.residual_k = residual;
  field.iterations = it;

  for (int u = 0; u < n; ++u) {
    field.absorbed_w += sys.source_w[u];
    field.conducted_w += sys.contact_g[u] * (t[u] - t_amb);
    if (opt.radiation)
      field.radiated_w += two_eps_sigma *
                          (t[u] * t[u] * t[u] * t[u] - t_amb * t_amb * t_amb * t_amb) *
                          sys.area_m2;
  }
  return field;
}

double peak_temperature(const ThermalField& field) {
  double peak = field.t_k.front();
  for (double v : field.t_k) peak = std::max(peak, v);
  return peak;
}

double failure_power_mw(const geometry::ThermalMask& mask,
                        const geometry::MaterialProperties& mat, const SolverOptions& opt) {
  auto peak_at = [&](double p_mw) {
    return peak_temperature(steady_state_temperature(mask, mat, p_mw, opt));
  };
  double lo = 0.0, hi = 1000.0;
  if (peak_at(hi) < mat.t_fail_k)
    throw std::runtime_error("bracket failure: peak below t_fail at 1 W");
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    if (peak_at(mid) >= mat.t_fail_k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<FailurePoint> failure_power_curve(const std::string& family,
                                              const std::vector<double>& spans_um,
                                              const geometry::WaveguideCrossSection& xs,
                                              const geometry::MaterialProperties& mat,
                                              double cell_um,
                                              const geometry::MaskOptions& mask_opt,
                                              const SolverOptions& opt,
                                              double gap_minus_span_um) {
  for (std::size_t i = 1; i < spans_um.size(); ++i)
    if (spans_um[i] <= spans_um[i - 1])
      throw std::invalid_argument("spans must be sorted ascending");
  std::vector<FailurePoint> curve;
  curve.reserve(spans_um.size());
  for (double span : spans_um) {
    geometry::DeviceDesign design;
    if (family == "straight")
      design.variant = geometry::StraightDesign{span};
    else if (family == "hybrid_needle")
      design.variant = geometry::HybridNeedleDesign{span, span + gap_minus_span_um};
    else if (family == "infinity")
      design.variant = geometry::InfinityDesign{span};
    else
      throw std::invalid_argument("unknown design family: " + family);
    const auto mask = geometry::rasterize_mask(design, xs, cell_um, mask_opt);
    curve.push_back({span, failure_power_mw(mask, mat, opt)});
  }
  return curve;
}

CalibrationResult calibrate_emissivity_wstrip(const CalibrationTargets& targets,
                                              const geometry::WaveguideCrossSection& xs,
                                              geometry::MaterialProperties mat,
                                              double cell_um, geometry::MaskOptions mask_opt,
                                              const SolverOptions& opt) {
  auto peaks = [&](double eps, double w_strip) {
    mat.emissivity = eps;
    mask_opt.w_strip_um = w_strip;
    const auto mask_inf = geometry::rasterize_mask(targets.infinity_design, xs, cell_um, mask_opt);
    const auto mask_ndl = geometry::rasterize_mask(targets.needle_design, xs, cell_um, mask_opt);
    const double pk_inf =
        peak_temperature(steady_state_temperature(mask_inf, mat, targets.p_wg_mw, opt));
    const double pk_ndl =
        peak_temperature(steady_state_temperature(mask_ndl, mat, targets.p_wg_mw, opt));
    return std::pair{pk_inf, pk_ndl};
  };
  // Least squares on the log temperature rises, plus a prior that keeps the
  // emissivity at the thin-film scale. A 25-75 nm transparent dielectric
  // emits well below a percent of blackbody at thermal wavelengths, and
  // without the prior the radiation term soaks up geometry error: the fit
  // drifts to an unphysical radiation-dominated corner whose T^4 losses
  // flatten the predicted failure powers across spans.
  constexpr double kEmissivityScale = 0.005;
  auto cost = [&](double eps, double pk_inf, double pk_ndl) {
    const double a = std::log(pk_inf - mat.t_amb_k) - std::log(targets.peak_infinity_k - mat.t_amb_k);
    const double b = std::log(pk_ndl - mat.t_amb_k) - std::log(targets.peak_needle_k - mat.t_amb_k);
    const double prior = eps / kEmissivityScale;
    return a * a + b * b + prior * prior;
  };

  CalibrationResult best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::map<std::pair<double, double>, std::pair<double, double>> cache;
  double eps_c = 0.002, w_c = 30.0;
  double eps_step = 0.002;  // additive; the grid must reach zero
  double w_step = 2.0;      // multiplicative
  for (int round = 0; round < 4; ++round) {
    for (int ie = -2; ie <= 2; ++ie)
      for (int iw = -2; iw <= 2; ++iw) {
        const double eps = std::clamp(eps_c + ie * eps_step, 0.0, 1.0);
        const double w_strip = std::clamp(w_c * std::pow(w_step, iw), 2.0, 200.0);
        auto [it, fresh] = cache.try_emplace({eps, w_strip});
        if (fresh) it->second = peaks(eps, w_strip);
        const auto [pk_inf, pk_ndl] = it->second;
        const double c = cost(eps, pk_inf, pk_ndl);
        if (c < best_cost) {
          best_cost = c;
          best = {eps, w_strip, pk_inf, pk_ndl};
        }
      }
    eps_c = best.emissivity;
    w_c = best.w_strip_um;
    eps_step /= 2.0;
    w_step = std::sqrt(w_step);
  }
  return best;
}

}  // namespace atip::thermal
