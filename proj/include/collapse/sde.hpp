#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collapse/density.hpp"
#include "collapse/noise.hpp"
#include "collapse/state.hpp"

namespace collapse {

// Integration plan for stochastic trajectories.
//
// Stability: with a kinetic term the explicit step must resolve the fastest
// grid mode, so validate() enforces dt < dx^2 mass / hbar.  Pure collapse
// dynamics (H = 0) has no such restriction; there dt only needs to resolve
// the damping rates.
struct TrajectoryConfig {
  double dt = 0.0;
  long n_steps = 0;
  std::uint64_t master_seed = 0;
  int n_trajectories = 1;
  long sample_stride = 1;
  std::pair<int, int> coherence_pair{0, 0};
  // Stream index of trajectory 0; trajectory k uses stream_offset + k.
  // Lets disjoint ensembles share a master seed.
  std::uint64_t stream_offset = 0;
  int n_threads = 0;  // 0 = hardware concurrency

  void validate(const Hamiltonian& h) const;
};

// Scratch buffers reused across steps of one trajectory.
struct SdeWorkspace {
  explicit SdeWorkspace(int n)
      : noise(n), q(n), conv(n), fft_work(n), h_psi(n) {}
  std::vector<double> noise;
  std::vector<double> q;
  std::vector<double> conv;
  std::vector<std::complex<double>> fft_work;
  std::vector<std::complex<double>> h_psi;
};

// One Euler-Maruyama update of the normalized collapse dynamics:
//
//   psi_k <- psi_k - (i/hbar)(H psi)_k dt
//            + (mu_k w_k - q.w) psi_k
//            - (1/2)(mu_k^2 D(0) - 2 mu_k (D*q)_k + q.(D*q)) psi_k dt,
//
// with q_i = mu_i |psi_i|^2, followed by renormalization.  Returns the norm
// before renormalization; throws NumericalBlowup when that norm leaves
// [0.5, 2.0].  The drift and damping are exactly the Ito terms that keep
// the norm a martingale, so the returned value hovers near 1 with O(dt)
// fluctuations.
double step(WaveState& state, const Hamiltonian& h,
            const MassDensityOperator& mop, const KernelContext& kernel,
            const NoiseField& noise, SdeWorkspace& ws);

// As above but with the increments in a bare span (no allocation).
double step_with_increments(WaveState& state, const Hamiltonian& h,
                            const MassDensityOperator& mop,
                            const KernelContext& kernel,
                            std::span<const double> increments, double dt,
                            SdeWorkspace& ws);

// Observable series of a single trajectory.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Observables> samples;
  double mean_abs_norm_drift = 0.0;
  double max_abs_norm_drift = 0.0;
  long n_steps = 0;
  WaveState final_state;
};

// Integrate one trajectory.  The random stream is fully determined by
// (config.master_seed, config.stream_offset + trajectory_index), so any
// trajectory can be recomputed in isolation.  Samples are taken at step 0,
// every sample_stride steps, and at the final step.  NumericalBlowup is
// rethrown with the failing step index attached.
TrajectoryRecord evolve(const WaveState& initial, const Hamiltonian& h,
                        const MassDensityOperator& mop,
                        const KernelContext& kernel,
                        const TrajectoryConfig& config,
                        std::uint64_t trajectory_index);

struct TrajectoryFailure {
  std::uint64_t trajectory_index = 0;
  long step_index = -1;
  std::string message;
};

// Mean and standard error of one observable over trajectories, per sample
// time.
struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> se;
};

struct EnsembleStats {
  std::vector<double> times;
  SeriesStats x;
  SeriesStats x2;
  SeriesStats p2;
  SeriesStats energy;
  std::vector<std::complex<double>> coherence_mean;
  // Combined standard error sqrt((Var Re + Var Im) / n) of the coherence.
  std::vector<double> coherence_se;
  // Ensemble-mean projector onto the final states of the trajectories
  // that finished.
  DensityState final_density;
  double mean_abs_norm_drift = 0.0;
  double max_abs_norm_drift = 0.0;
  long n_requested = 0;
  long n_succeeded = 0;
  std::vector<TrajectoryFailure> failures;
};

// Run config.n_trajectories independent trajectories and reduce them.
//
// Reduction order is fixed: trajectories are grouped into chunks of 64 by
// index, each chunk is reduced in index order, and chunk partials are
// merged in chunk order after all workers finish.  The result is therefore
// bit-identical for any thread count.  Trajectories that blow up are
// excluded from the statistics and reported in failures.
EnsembleStats run_ensemble(const WaveState& initial, const Hamiltonian& h,
                           const MassDensityOperator& mop,
                           const KernelContext& kernel,
                           const TrajectoryConfig& config);

}  // namespace collapse
