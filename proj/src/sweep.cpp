#include "atip/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "atip/atomtrap.hpp"

namespace atip::sweep {

void validate(const SweepSpec& spec) {
  if (spec.w_wg_um.empty() || spec.t_wg_nm.empty() || spec.t_mem_nm.empty())
    throw std::invalid_argument("sweep axes must be nonempty");
  // A t_mem at or above every t_wg can never form a ridge; reject it up
  // front. Mixed grids keep such rows and mark them infeasible per point.
  const double max_t_wg = *std::max_element(spec.t_wg_nm.begin(), spec.t_wg_nm.end());
  for (double t_mem : spec.t_mem_nm)
    if (t_mem >= max_t_wg)
      throw std::invalid_argument("every t_mem_nm must be below the largest t_wg_nm");
  const std::size_t points = spec.w_wg_um.size() * spec.t_wg_nm.size() * spec.t_mem_nm.size();
  if (points > spec.max_points) throw std::invalid_argument("sweep grid exceeds max_points cap");
  if (spec.blue_fraction <= 0 || spec.blue_fraction >= 1)
    throw std::invalid_argument("blue_fraction must be in (0, 1)");
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("ATIP_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

double evaluate_point(const SweepSpec& spec, const geometry::WaveguideCrossSection& xs) {
  switch (spec.objective) {
    case Objective::DepthPerMw:
      return atomtrap::depth_vs_power(xs, 1.0, spec.blue_fraction, spec.lambda_blue_nm,
                                      spec.lambda_red_nm, spec.h_nm);
    case Objective::DepthAtPower:
      return atomtrap::depth_vs_power(xs, spec.total_power_mw, spec.blue_fraction,
                                      spec.lambda_blue_nm, spec.lambda_red_nm, spec.h_nm);
    case Objective::PFail:
    default: {
      const auto mask =
          geometry::rasterize_mask(spec.design, xs, spec.cell_um, spec.mask_options);
      return thermal::failure_power_mw(mask, spec.material);
    }
  }
}

}  // namespace

std::vector<SweepRow> grid_sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<SweepRow> rows;
  for (double w : spec.w_wg_um)
    for (double t_wg : spec.t_wg_nm)
      for (double t_mem : spec.t_mem_nm)
        rows.push_back({w, t_wg, t_mem, std::numeric_limits<double>::quiet_NaN(), "pending"});

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
      SweepRow& row = rows[i];
      geometry::WaveguideCrossSection xs{row.w_wg_um, row.t_wg_nm, row.t_mem_nm, spec.n_core,
                                         spec.n_amb};
      try {
        row.objective = evaluate_point(spec, xs);
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = e.what();
      }
    }
  };
  const int workers = std::min<std::size_t>(worker_count(), rows.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return rows;
}

namespace {

struct Vec3 {
  double v[3];
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

}  // namespace

OptimizeResult optimize_depth_per_mw(const Bounds& w_wg_um, const Bounds& t_wg_nm,
                                     const Bounds& t_mem_nm, const SweepSpec& seed_grid) {
  SweepSpec spec = seed_grid;
  spec.objective = Objective::DepthPerMw;
  validate(spec);
  for (double w : spec.w_wg_um)
    if (w < w_wg_um.lo || w > w_wg_um.hi)
      throw std::invalid_argument("seed grid w_wg_um outside bounds");
  for (double t : spec.t_wg_nm)
    if (t < t_wg_nm.lo || t > t_wg_nm.hi)
      throw std::invalid_argument("seed grid t_wg_nm outside bounds");
  for (double t : spec.t_mem_nm)
    if (t < t_mem_nm.lo || t > t_mem_nm.hi)
      throw std::invalid_argument("seed grid t_mem_nm outside bounds");

  const auto rows = grid_sweep(spec);
  const SweepRow* best_row = nullptr;
  for (const auto& r : rows)
    if (r.status == "ok" && (!best_row || r.objective > best_row->objective)) best_row = &r;
  if (!best_row) throw std::runtime_error("all grid points infeasible");

  int evals = static_cast<int>(rows.size());
  const Bounds bounds[3] = {w_wg_um, t_wg_nm, t_mem_nm};
  auto clamp_point = [&](Vec3 p) {
    for (int i = 0; i < 3; ++i) p[i] = std::clamp(p[i], bounds[i].lo, bounds[i].hi);
    // Keep the ridge invariant t_mem < t_wg with a small margin.
    p[2] = std::min(p[2], p[1] - 1.0);
    p[2] = std::max(p[2], bounds[2].lo);
    return p;
  };
  auto objective = [&](Vec3 p) -> double {
    geometry::WaveguideCrossSection xs{p[0], p[1], p[2], spec.n_core, spec.n_amb};
    ++evals;
    try {
      return atomtrap::depth_vs_power(xs, 1.0, spec.blue_fraction, spec.lambda_blue_nm,
                                      spec.lambda_red_nm, spec.h_nm);
    } catch (const std::exception&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  // Nelder-Mead (maximizing), simplex seeded around the best grid point.
  Vec3 start{{best_row->w_wg_um, best_row->t_wg_nm, best_row->t_mem_nm}};
  const double steps[3] = {0.1, 10.0, 5.0};  // um, nm, nm
  Vec3 simplex[4];
  double value[4];
  simplex[0] = clamp_point(start);
  value[0] = objective(simplex[0]);
  for (int i = 1; i < 4; ++i) {
    Vec3 p = start;
    p[i - 1] += steps[i - 1];
    simplex[i] = clamp_point(p);
    value[i] = objective(simplex[i]);
  }

  const int max_nm_iters = 100;
  for (int iter = 0; iter < max_nm_iters; ++iter) {
    int order[4] = {0, 1, 2, 3};
    std::sort(order, order + 4, [&](int a, int b) { return value[a] > value[b]; });
    Vec3 sorted[4];
    double sorted_val[4];
    for (int i = 0; i < 4; ++i) {
      sorted[i] = simplex[order[i]];
      sorted_val[i] = value[order[i]];
    }
    std::copy(sorted, sorted + 4, simplex);
    std::copy(sorted_val, sorted_val + 4, value);

    // Convergence: simplex extent and objective spread.
    double extent[3] = {0, 0, 0};
    for (int i = 1; i < 4; ++i)
      for (int d = 0; d < 3; ++d)
        extent[d] = std::max(extent[d], std::abs(simplex[i][d] - simplex[0][d]));
    const bool small = extent[0] < 0.01 && extent[1] < 1.0 && extent[2] < 1.0;
    const bool flat =
        std::abs(value[0] - value[3]) < 0.005 * std::max(std::abs(value[0]), 1e-12);
    if (small || flat) break;

    Vec3 centroid{{0, 0, 0}};
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 3; ++d) centroid[d] += simplex[i][d] / 3.0;

    auto affine = [&](double t) {
      Vec3 p;
      for (int d = 0; d < 3; ++d) p[d] = centroid[d] + t * (centroid[d] - simplex[3][d]);
      return clamp_point(p);
    };
    const Vec3 reflected = affine(1.0);
    const double fr = objective(reflected);
    if (fr > value[0]) {
      const Vec3 expanded = affine(2.0);
      const double fe = objective(expanded);
      if (fe > fr) {
        simplex[3] = expanded;
        value[3] = fe;
      } else {
        simplex[3] = reflected;
        value[3] = fr;
      }
    } else if (fr > value[2]) {
      simplex[3] = reflected;
      value[3] = fr;
    } else {
      const Vec3 contracted = affine(-0.5);
      const double fc = objective(contracted);
      if (fc > value[3]) {
        simplex[3] = contracted;
        value[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int d = 0; d < 3; ++d)
            simplex[i][d] = 0.5 * (simplex[i][d] + simplex[0][d]);
          simplex[i] = clamp_point(simplex[i]);
          value[i] = objective(simplex[i]);
        }
      }
    }
  }

  int best_i = 0;
  for (int i = 1; i < 4; ++i)
    if (value[i] > value[best_i]) best_i = i;

  OptimizeResult result;
  // Refinement never reports worse than its starting grid point.
  if (value[best_i] >= best_row->objective) {
    result.best = {simplex[best_i][0], simplex[best_i][1], simplex[best_i][2], spec.n_core,
                   spec.n_amb};
    result.depth_per_mw_uk = value[best_i];
  } else {
    result.best = {best_row->w_wg_um, best_row->t_wg_nm, best_row->t_mem_nm, spec.n_core,
                   spec.n_amb};
    result.depth_per_mw_uk = best_row->objective;
  }
  result.evaluations = evals;
  return result;
}

}  // namespace atip::sweep
