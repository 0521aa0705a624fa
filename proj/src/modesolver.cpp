#include "atip/modesolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "atip/constants.hpp"

namespace atip::modesolver {

namespace constants = atip::constants;

double solve_slab_te(double n_core, double n_clad, double t_nm, double lambda_nm) {
  if (n_core <= n_clad) throw std::invalid_argument("n_core must exceed n_clad");
  if (t_nm <= 0 || lambda_nm <= 0) throw std::invalid_argument("t and lambda must be positive");
  const double k0 = 2.0 * constants::pi / (lambda_nm * 1e-9);
  const double t = t_nm * 1e-9;
  // TE0 root of tan(kappa t / 2) = gamma / kappa. The residual
  // tan(kappa t/2) - gamma/kappa decreases in n_eff on the TE0 branch,
  // which requires kappa t/2 < pi/2; thick slabs have higher branches
  // that the bracket below excludes.
  const double kappa_max = constants::pi / t;
  const double n2_branch = n_core * n_core - (kappa_max / k0) * (kappa_max / k0);
  double lo = std::max(n_clad * n_clad, n2_branch) > n_clad * n_clad
                  ? std::sqrt(n2_branch) + 1e-12
                  : n_clad + 1e-12;
  double hi = n_core - 1e-12;
  for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double kappa = k0 * std::sqrt(n_core * n_core - mid * mid);
    const double gamma = k0 * std::sqrt(std::max(mid * mid - n_clad * n_clad, 0.0));
    const double residual = std::tan(kappa * t / 2.0) - gamma / kappa;
    if (residual > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double evanescent_decay_length_nm(double n_eff, double lambda_nm) {
  if (n_eff <= 1.0) throw std::invalid_argument("unguided: n_eff must exceed 1");
  return lambda_nm / (2.0 * constants::pi * std::sqrt(n_eff * n_eff - 1.0));
}

double carried_power_w(const ModeSolution& mode) {
  const double h = mode.h_nm * 1e-9;
  double sum2 = 0.0;
  for (double e : mode.field) sum2 += e * e;
  return 0.5 * mode.n_eff * constants::eps0 * constants::c_light * sum2 * h * h;
}

ModeSolution solve_mode(const geometry::WaveguideCrossSection& xs, double lambda_nm,
                        double h_nm, const SolveOptions& opt) {
  geometry::validate(xs);
  if (h_nm <= 0 || h_nm > 20.0) throw std::invalid_argument("grid spacing must be in (0, 20] nm");
  if (opt.margin_um < 2.0) throw std::invalid_argument("window margin must be >= 2 um");

  const double h = h_nm * 1e-9;
  const double k0 = 2.0 * constants::pi / (lambda_nm * 1e-9);
  const double w = xs.w_wg_um * 1e-6;
  const double t_wg = xs.t_wg_nm * 1e-9;
  const double t_mem = xs.t_mem_nm * 1e-9;
  const double margin = opt.margin_um * 1e-6;

  const int nx = static_cast<int>(std::lround((w + 2.0 * margin) / h));
  const int ny = static_cast<int>(std::lround((t_wg + 2.0 * margin) / h));
  const std::size_t n = static_cast<std::size_t>(nx) * ny;

  ModeSolution mode;
  mode.lambda_nm = lambda_nm;
  mode.h_nm = h_nm;
  mode.surface_y_nm = xs.t_wg_nm;
  mode.nx = nx;
  mode.ny = ny;
  mode.x_nm.resize(nx);
  mode.y_nm.resize(ny);
  const double x0 = -0.5 * (w + 2.0 * margin);
  for (int i = 0; i < nx; ++i) mode.x_nm[i] = (x0 + (i + 0.5) * h) * 1e9;
  for (int j = 0; j < ny; ++j) mode.y_nm[j] = (-margin + (j + 0.5) * h) * 1e9;

  // Index map by cell-center sampling: membrane slab plus the ridge.
  Eigen::VectorXd n2(static_cast<Eigen::Index>(n));
  for (int i = 0; i < nx; ++i) {
    const double x = mode.x_nm[i] * 1e-9;
    for (int j = 0; j < ny; ++j) {
      const double y = mode.y_nm[j] * 1e-9;
      const bool in_mem = y >= 0.0 && y <= t_mem;
      const bool in_ridge = y >= 0.0 && y <= t_wg && std::abs(x) <= w / 2.0;
      const double nn = (in_mem || in_ridge) ? xs.n_core : xs.n_amb;
      n2[static_cast<Eigen::Index>(i) * ny + j] = nn * nn;
    }
  }

  // Shift from the equivalent slab of the ridge thickness.
  const double n_guess = solve_slab_te(xs.n_core, xs.n_amb, xs.t_wg_nm, lambda_nm);
  const double shift = (k0 * n_guess) * (k0 * n_guess);

  // A = Laplacian + k0^2 n^2, Dirichlet boundary; shifted system A - shift I.
  const double inv_h2 = 1.0 / (h * h);
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(5 * n);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(i) * ny + j;
      trips.emplace_back(row, row, -4.0 * inv_h2 + k0 * k0 * n2[row] - shift);
      if (i > 0) trips.emplace_back(row, row - ny, inv_h2);
      if (i < nx - 1) trips.emplace_back(row, row + ny, inv_h2);
      if (j > 0) trips.emplace_back(row, row - 1, inv_h2);
      if (j < ny - 1) trips.emplace_back(row, row + 1, inv_h2);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(trips.begin(), trips.end());

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("mode solver: factorization failed");

  // Inverse power iteration on (A - shift I) converges to the eigenvalue
  // nearest the slab guess, i.e. the fundamental quasi-TE mode.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0);
  // Seed with the index profile so the start vector overlaps the even mode.
  for (Eigen::Index r = 0; r < v.size(); ++r) v[r] = n2[r];
  v.normalize();

  double eig = shift;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    Eigen::VectorXd next = lu.solve(v);
    next.normalize();
    const double eig_next = next.dot(a * next) + shift * next.squaredNorm();
    const double change = std::abs(eig_next - eig) / std::max(std::abs(eig_next), 1e-300);
    eig = eig_next;
    v = next;
    if (it > 0 && change < opt.tol) break;
  }
  if (it >= opt.max_iterations) throw std::runtime_error("mode solver: not converged");
  mode.iterations = it + 1;

  if (eig <= 0) throw std::runtime_error("no guided mode");
  mode.n_eff = std::sqrt(eig) / k0;
  if (mode.n_eff <= xs.n_amb) throw std::runtime_error("no guided mode");

  // Fix sign so the field is positive at the ridge center, then power-normalize.
  const Eigen::Index center = static_cast<Eigen::Index>(nx / 2) * ny + static_cast<Eigen::Index>(
      std::lround((margin + t_wg / 2.0) / h));
  if (v[center] < 0) v = -v;
  mode.field.assign(v.data(), v.data() + v.size());
  const double p = carried_power_w(mode);
  const double scale = std::sqrt(1e-3 / p);
  for (double& e : mode.field) e *= scale;
  return mode;
}

}  // namespace atip::modesolver
