#include "collapse/master.hpp"

#include <cmath>
#include <limits>

#include "collapse/errors.hpp"

namespace collapse {
namespace {

// out = -(i/hbar)[H, rho] - Gamma .* rho.  The kinetic stencil is real and
// symmetric, so rho H equals (H rho^dagger)^dagger computed column-wise.
void rhs_into(const DensityState& rho, const Hamiltonian& h,
              const std::vector<double>& gamma, DensityState& out,
              std::vector<std::complex<double>>& col,
              std::vector<std::complex<double>>& hcol) {
  const int n = rho.n;
  for (auto& z : out.m) z = 0.0;
  if (!h.is_zero()) {
    // left product: (H rho / hbar) column by column
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) col[i] = rho.at(i, j);
      h.apply_over_hbar(col, hcol);
      for (int i = 0; i < n; ++i)
        out.at(i, j) = std::complex<double>(0.0, -1.0) * hcol[i];
    }
    // right product: rho H / hbar, using H applied to conjugated rows
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) col[j] = std::conj(rho.at(i, j));
      h.apply_over_hbar(col, hcol);
      for (int j = 0; j < n; ++j)
        out.at(i, j) -= std::complex<double>(0.0, -1.0) * std::conj(hcol[j]);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.at(i, j) -= gamma[i * n + j] * rho.at(i, j);
}

double frobenius(const DensityState& r) {
  double s = 0.0;
  for (const auto& z : r.m) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

double decoherence_rate(const NoiseKernel& kernel, double mass,
                        double separation) {
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  return mass * mass * (kernel.value_at_zero - kernel(separation));
}

double heating_rate_1d(const NoiseKernel& kernel, double mass,
                       const PhysicalConstants& c) {
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  c.validate();
  if (!kernel.curvature_at_zero)
    throw KernelNotSmooth("kernel '" + kernel.label +
                          "' has no curvature at zero");
  return -0.5 * c.hbar * c.hbar * mass * *kernel.curvature_at_zero;
}

std::vector<double> decoherence_matrix(const NoiseKernel& kernel,
                                       const MassDensityOperator& mop,
                                       const GridSpec& grid) {
  mop.validate(grid);
  const int n = grid.n_points;
  const double d0 = kernel.value_at_zero;
  // Kernel values at each lag, shared by all pairs at that separation.
  std::vector<double> lag(n);
  for (int d = 0; d < n; ++d) lag[d] = kernel(grid.periodic_distance(d, 0));
  std::vector<double> gamma(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double mi = mop.site_mass[i];
    for (int j = 0; j < n; ++j) {
      const double mj = mop.site_mass[j];
      double g = 0.5 * (mi * mi + mj * mj) * d0 -
                 mi * mj * lag[std::abs(i - j)];
      if (i == j) g = 0.0;
      gamma[i * n + j] = g;
    }
  }
  return gamma;
}

void master_rhs(const DensityState& rho, const Hamiltonian& h,
                const MassDensityOperator& mop, const NoiseKernel& kernel,
                DensityState& out) {
  const int n = h.grid().n_points;
  if (rho.n != n) throw GridMismatch("density matrix does not match grid");
  if (out.n != n) throw DimensionMismatch("output matrix size mismatch");
  const auto gamma = decoherence_matrix(kernel, mop, h.grid());
  std::vector<std::complex<double>> col(n), hcol(n);
  rhs_into(rho, h, gamma, out, col, hcol);
  out.time = rho.time;
}

DensityState evolve_master(DensityState rho, const Hamiltonian& h,
                           const MassDensityOperator& mop,
                           const NoiseKernel& kernel, double dt, long n_steps,
                           const std::function<void(const DensityState&)>&
                               on_sample) {
  const int n = h.grid().n_points;
  if (rho.n != n) throw GridMismatch("density matrix does not match grid");
  if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
  if (n_steps < 0) throw InvalidParameter("n_steps must be >= 0");
  const auto gamma = decoherence_matrix(kernel, mop, h.grid());

  DensityState k1 = DensityState::zero(n), k2 = k1, k3 = k1, k4 = k1,
               stage = k1;
  std::vector<std::complex<double>> col(n), hcol(n);
  const double t0 = rho.time;

  if (on_sample) on_sample(rho);
  for (long s = 0; s < n_steps; ++s) {
    rhs_into(rho, h, gamma, k1, col, hcol);
    for (std::size_t i = 0; i < rho.m.size(); ++i)
      stage.m[i] = rho.m[i] + 0.5 * dt * k1.m[i];
    rhs_into(stage, h, gamma, k2, col, hcol);
    for (std::size_t i = 0; i < rho.m.size(); ++i)
      stage.m[i] = rho.m[i] + 0.5 * dt * k2.m[i];
    rhs_into(stage, h, gamma, k3, col, hcol);
    for (std::size_t i = 0; i < rho.m.size(); ++i)
      stage.m[i] = rho.m[i] + dt * k3.m[i];
    rhs_into(stage, h, gamma, k4, col, hcol);
    for (std::size_t i = 0; i < rho.m.size(); ++i)
      rho.m[i] += dt / 6.0 *
                  (k1.m[i] + 2.0 * k2.m[i] + 2.0 * k3.m[i] + k4.m[i]);
    rho.time = t0 + (s + 1) * dt;
    if (on_sample) on_sample(rho);
  }
  return rho;
}

DensityState exact_pure_decoherence(const DensityState& rho0,
                                    const NoiseKernel& kernel,
                                    const MassDensityOperator& mop,
                                    const GridSpec& grid, double t) {
  if (rho0.n != grid.n_points)
    throw GridMismatch("density matrix does not match grid");
  if (!(t >= 0.0)) throw InvalidParameter("t must be >= 0");
  const auto gamma = decoherence_matrix(kernel, mop, grid);
  DensityState r = rho0;
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j)
      r.at(i, j) *= std::exp(-gamma[i * r.n + j] * t);
  r.time = rho0.time + t;
  return r;
}

double master_stable_dt(const DensityState& rho0, const Hamiltonian& h,
                        const MassDensityOperator& mop,
                        const NoiseKernel& kernel) {
  DensityState rhs = DensityState::zero(rho0.n);
  master_rhs(rho0, h, mop, kernel, rhs);
  const double rho_norm = frobenius(rho0);
  const double rhs_norm = frobenius(rhs);
  double dt = rhs_norm > 0.0 ? 1e-3 * rho_norm / rhs_norm
                             : std::numeric_limits<double>::infinity();
  // Cap by the fastest phase rotation (commutator doubles the spectral
  // range) plus the largest damping rate.
  const auto gamma = decoherence_matrix(kernel, mop, h.grid());
  double gmax = 0.0;
  for (double g : gamma) gmax = std::max(gmax, g);
  const double rate = 2.0 * h.spectral_bound() / h.hbar() + gmax;
  if (rate > 0.0) dt = std::min(dt, 1.0 / rate);
  if (!std::isfinite(dt))
    throw InvalidParameter("cannot size a step for an identically zero flow");
  return dt;
}

Observables measure_density(const DensityState& rho, const Hamiltonian& h,
                            std::pair<int, int> coherence_pair) {
  const GridSpec& grid = h.grid();
  const int n = grid.n_points;
  if (rho.n != n) throw GridMismatch("density matrix does not match grid");
  if (coherence_pair.first < 0 || coherence_pair.first >= n ||
      coherence_pair.second < 0 || coherence_pair.second >= n)
    throw InvalidParameter("coherence pair indices out of range");
  Observables o;
  for (int i = 0; i < n; ++i) {
    const double p = rho.at(i, i).real();
    const double x = grid.position(i);
    o.mean_x += x * p;
    o.mean_x2 += x * x * p;
  }
  double p2 = 0.0;
  for (int i = 0; i < n; ++i) {
    p2 -= (rho.at((i + 1) % n, i) + rho.at((i + n - 1) % n, i) -
           2.0 * rho.at(i, i))
              .real();
  }
  const double hb = h.hbar();
  o.mean_p2 = p2 * hb * hb / (grid.dx * grid.dx);
  if (h.is_zero()) {
    o.energy = 0.0;
  } else {
    double e = h.has_kinetic() ? o.mean_p2 / (2.0 * h.mass()) : 0.0;
    if (!h.potential().empty())
      for (int i = 0; i < n; ++i)
        e += h.potential()[i] * rho.at(i, i).real();
    o.energy = e;
  }
  o.coherence = rho.at(coherence_pair.first, coherence_pair.second);
  return o;
}

}  // namespace collapse
