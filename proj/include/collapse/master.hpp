#pragma once

#include <functional>
#include <vector>

#include "collapse/density.hpp"
#include "collapse/kernels.hpp"
#include "collapse/state.hpp"

namespace collapse {

// Closed-form decay rate of the (x, x + separation) coherence for a point
// particle of the given mass [s^-1]: mass^2 (D(0) - D(separation)).
double decoherence_rate(const NoiseKernel& kernel, double mass,
                        double separation);

// Closed-form growth rate of <p^2/2m> in one dimension [W]:
// -hbar^2 mass D''(0) / 2.  Throws KernelNotSmooth when the kernel carries
// no curvature value.
double heating_rate_1d(const NoiseKernel& kernel, double mass,
                       const PhysicalConstants& c = kCodata2018);

// Pairwise damping matrix on the grid [s^-1], row-major n x n:
// Gamma_kl = (mu_k^2 + mu_l^2) D(0)/2 - mu_k mu_l D(x_k - x_l),
// with minimum-image separations.  Diagonal is exactly zero.
std::vector<double> decoherence_matrix(const NoiseKernel& kernel,
                                       const MassDensityOperator& mop,
                                       const GridSpec& grid);

// Ensemble-mean equation of motion:
//   d rho / dt = -(i/hbar) [H, rho] - Gamma .* rho
// (entrywise product).  out must be sized like rho.
void master_rhs(const DensityState& rho, const Hamiltonian& h,
                const MassDensityOperator& mop, const NoiseKernel& kernel,
                DensityState& out);

// Classic fourth-order Runge-Kutta on the full matrix.  on_sample, when
// given, is called with the state before the first step and after every
// step.  Implemented independently of the trajectory integrator so the two
// can cross-check each other.
DensityState evolve_master(DensityState rho, const Hamiltonian& h,
                           const MassDensityOperator& mop,
                           const NoiseKernel& kernel, double dt, long n_steps,
                           const std::function<void(const DensityState&)>&
                               on_sample = nullptr);

// Entrywise exact solution for H = 0: rho_ij(t0 + t) = rho_ij(t0)
// exp(-Gamma_ij t).
DensityState exact_pure_decoherence(const DensityState& rho0,
                                    const NoiseKernel& kernel,
                                    const MassDensityOperator& mop,
                                    const GridSpec& grid, double t);

// Step suggestion keeping both |d rho| per step below 1e-3 |rho| and the
// fastest phase rotation well inside the RK4 stability region.
double master_stable_dt(const DensityState& rho0, const Hamiltonian& h,
                        const MassDensityOperator& mop,
                        const NoiseKernel& kernel);

// Expectation values of a density matrix (same conventions as measure()).
Observables measure_density(const DensityState& rho, const Hamiltonian& h,
                            std::pair<int, int> coherence_pair);

}  // namespace collapse
