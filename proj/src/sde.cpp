#include "collapse/sde.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "collapse/errors.hpp"

namespace collapse {
namespace {

constexpr long kChunk = 64;  // trajectories per reduction chunk
constexpr double kNormFloor = 0.5;
constexpr double kNormCeil = 2.0;

// Numerically stable streaming moments (Welford), mergeable in fixed order.
struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const long total = n + o.n;
    mean += d * (static_cast<double>(o.n) / total);
    m2 += o.m2 + d * d * (static_cast<double>(n) * o.n / total);
    n = total;
  }

  double se() const {
    return n > 1 ? std::sqrt(m2 / (static_cast<double>(n) * (n - 1))) : 0.0;
  }
};

struct ChunkPartial {
  std::vector<Moments> x, x2, p2, energy, coh_re, coh_im;
  std::vector<std::complex<double>> density_sum;
  double drift_mean_sum = 0.0;
  double drift_max = 0.0;
  long n_ok = 0;
  std::vector<TrajectoryFailure> failures;

  ChunkPartial() = default;
  ChunkPartial(std::size_t n_samples, int n_grid)
      : x(n_samples),
        x2(n_samples),
        p2(n_samples),
        energy(n_samples),
        coh_re(n_samples),
        coh_im(n_samples),
        density_sum(static_cast<std::size_t>(n_grid) * n_grid, 0.0) {}

  void add(const TrajectoryRecord& rec) {
    for (std::size_t s = 0; s < rec.samples.size(); ++s) {
      const Observables& o = rec.samples[s];
      x[s].add(o.mean_x);
      x2[s].add(o.mean_x2);
      p2[s].add(o.mean_p2);
      energy[s].add(o.energy);
      coh_re[s].add(o.coherence.real());
      coh_im[s].add(o.coherence.imag());
    }
    const int n = rec.final_state.size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        density_sum[static_cast<std::size_t>(i) * n + j] +=
            rec.final_state.amplitudes[i] *
            std::conj(rec.final_state.amplitudes[j]);
    drift_mean_sum += rec.mean_abs_norm_drift;
    drift_max = std::max(drift_max, rec.max_abs_norm_drift);
    ++n_ok;
  }
};

std::vector<long> sample_steps(const TrajectoryConfig& cfg) {
  std::vector<long> steps;
  for (long s = 0; s <= cfg.n_steps; s += cfg.sample_stride) steps.push_back(s);
  if (steps.back() != cfg.n_steps) steps.push_back(cfg.n_steps);
  return steps;
}

}  // namespace

void TrajectoryConfig::validate(const Hamiltonian& h) const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidParameter("dt must be finite and > 0");
  if (n_steps < 0) throw InvalidParameter("n_steps must be >= 0");
  if (n_trajectories < 1)
    throw InvalidParameter("n_trajectories must be >= 1");
  if (sample_stride < 1) throw InvalidParameter("sample_stride must be >= 1");
  const int n = h.grid().n_points;
  if (coherence_pair.first < 0 || coherence_pair.first >= n ||
      coherence_pair.second < 0 || coherence_pair.second >= n)
    throw InvalidParameter("coherence pair indices out of range");
  if (h.has_kinetic()) {
    const double bound = h.grid().dx * h.grid().dx * h.mass() / h.hbar();
    if (!(dt < bound))
      throw InvalidParameter(
          "dt violates the explicit-step kinetic stability bound dx^2 m / "
          "hbar = " +
          std::to_string(bound));
  }
}

double step_with_increments(WaveState& state, const Hamiltonian& h,
                            const MassDensityOperator& mop,
                            const KernelContext& kernel,
                            std::span<const double> increments, double dt,
                            SdeWorkspace& ws) {
  const GridSpec& grid = kernel.grid();
  const int n = grid.n_points;
  if (h.grid() != grid) throw GridMismatch("hamiltonian grid != kernel grid");
  if (state.size() != n || static_cast<int>(increments.size()) != n)
    throw DimensionMismatch("state or noise does not match grid size");
  mop.validate(grid);

  // q_i = mu_i |psi_i|^2 and its kernel convolution.
  for (int i = 0; i < n; ++i)
    ws.q[i] = mop.site_mass[i] * std::norm(state.amplitudes[i]);
  kernel.convolve_into(ws.q, ws.conv, ws.fft_work);

  double q_dot_w = 0.0;
  double q_dot_conv = 0.0;
  for (int i = 0; i < n; ++i) {
    q_dot_w += ws.q[i] * increments[i];
    q_dot_conv += ws.q[i] * ws.conv[i];
  }

  const bool zero_h = h.is_zero();
  if (!zero_h) h.apply_over_hbar(state.amplitudes, ws.h_psi);

  const double d0 = kernel.value_at_zero();
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mu = mop.site_mass[i];
    const double damping =
        0.5 * (mu * mu * d0 - 2.0 * mu * ws.conv[i] + q_dot_conv);
    const double multiplier = mu * increments[i] - q_dot_w - damping * dt;
    std::complex<double> next = state.amplitudes[i] * (1.0 + multiplier);
    if (!zero_h)
      next -= std::complex<double>(0.0, 1.0) * ws.h_psi[i] * dt;
    state.amplitudes[i] = next;
    norm2 += std::norm(next);
  }

  const double pre_norm = std::sqrt(norm2);
  if (!(pre_norm >= kNormFloor && pre_norm <= kNormCeil) ||
      !std::isfinite(pre_norm))
    throw NumericalBlowup("pre-renormalization norm " +
                          std::to_string(pre_norm) + " outside [" +
                          std::to_string(kNormFloor) + ", " +
                          std::to_string(kNormCeil) + "]");
  const double inv = 1.0 / pre_norm;
  for (auto& a : state.amplitudes) a *= inv;
  state.time += dt;
  return pre_norm;
}

double step(WaveState& state, const Hamiltonian& h,
            const MassDensityOperator& mop, const KernelContext& kernel,
            const NoiseField& noise, SdeWorkspace& ws) {
  return step_with_increments(state, h, mop, kernel, noise.increments,
                              noise.dt, ws);
}

TrajectoryRecord evolve(const WaveState& initial, const Hamiltonian& h,
                        const MassDensityOperator& mop,
                        const KernelContext& kernel,
                        const TrajectoryConfig& config,
                        std::uint64_t trajectory_index) {
  config.validate(h);
  const GridSpec& grid = kernel.grid();
  if (h.grid() != grid) throw GridMismatch("hamiltonian grid != kernel grid");
  if (initial.size() != grid.n_points)
    throw GridMismatch("state does not match grid size");

  NormalStream rng(
      SeedPath{config.master_seed, config.stream_offset + trajectory_index});
  SdeWorkspace ws(grid.n_points);
  TrajectoryRecord rec;
  rec.final_state = initial;
  WaveState& state = rec.final_state;
  const double t0 = initial.time;

  const auto steps = sample_steps(config);
  rec.times.reserve(steps.size());
  rec.samples.reserve(steps.size());
  std::size_t next_sample = 0;
  double drift_sum = 0.0;

  for (long s = 0; s <= config.n_steps; ++s) {
    if (next_sample < steps.size() && steps[next_sample] == s) {
      rec.times.push_back(state.time);
      rec.samples.push_back(measure(state, h, config.coherence_pair));
      ++next_sample;
    }
    if (s == config.n_steps) break;
    kernel.sample_into(config.dt, rng, ws.noise, ws.fft_work);
    double pre_norm;
    try {
      pre_norm =
          step_with_increments(state, h, mop, kernel, ws.noise, config.dt, ws);
    } catch (const NumericalBlowup& e) {
      throw NumericalBlowup(std::string(e.what()) + " at step " +
                                std::to_string(s),
                            s);
    }
    state.time = t0 + (s + 1) * config.dt;  // avoid accumulated rounding
    const double drift = std::fabs(pre_norm - 1.0);
    drift_sum += drift;
    rec.max_abs_norm_drift = std::max(rec.max_abs_norm_drift, drift);
  }

  rec.n_steps = config.n_steps;
  rec.mean_abs_norm_drift =
      config.n_steps > 0 ? drift_sum / config.n_steps : 0.0;
  return rec;
}

EnsembleStats run_ensemble(const WaveState& initial, const Hamiltonian& h,
                           const MassDensityOperator& mop,
                           const KernelContext& kernel,
                           const TrajectoryConfig& config) {
  config.validate(h);
  const int n = kernel.grid().n_points;
  const long n_traj = config.n_trajectories;
  const long n_chunks = (n_traj + kChunk - 1) / kChunk;
  const std::size_t n_samples = sample_steps(config).size();

  std::vector<ChunkPartial> partials(n_chunks);
  std::atomic<long> next_chunk{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const long c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      ChunkPartial partial(n_samples, n);
      const long lo = c * kChunk;
      const long hi = std::min(n_traj, lo + kChunk);
      for (long t = lo; t < hi; ++t) {
        try {
          partial.add(evolve(initial, h, mop, kernel, config,
                             static_cast<std::uint64_t>(t)));
        } catch (const NumericalBlowup& e) {
          partial.failures.push_back(TrajectoryFailure{
              static_cast<std::uint64_t>(t), e.step_index, e.what()});
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
      partials[c] = std::move(partial);
    }
  };

  int n_threads = config.n_threads > 0
                      ? config.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = static_cast<int>(
      std::min<long>(n_threads, n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Deterministic reduction: merge chunk partials in chunk order.
  std::vector<Moments> x(n_samples), x2(n_samples), p2(n_samples),
      energy(n_samples), coh_re(n_samples), coh_im(n_samples);
  EnsembleStats out;
  out.final_density = DensityState::zero(n);
  double drift_mean_sum = 0.0;
  for (const ChunkPartial& partial : partials) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      x[s].merge(partial.x[s]);
      x2[s].merge(partial.x2[s]);
      p2[s].merge(partial.p2[s]);
      energy[s].merge(partial.energy[s]);
      coh_re[s].merge(partial.coh_re[s]);
      coh_im[s].merge(partial.coh_im[s]);
    }
    for (std::size_t k = 0; k < out.final_density.m.size(); ++k)
      out.final_density.m[k] += partial.density_sum[k];
    drift_mean_sum += partial.drift_mean_sum;
    out.max_abs_norm_drift =
        std::max(out.max_abs_norm_drift, partial.drift_max);
    out.n_succeeded += partial.n_ok;
    out.failures.insert(out.failures.end(), partial.failures.begin(),
                        partial.failures.end());
  }
  out.n_requested = n_traj;

  const auto steps = sample_steps(config);
  out.times.resize(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s)
    out.times[s] = initial.time + steps[s] * config.dt;

  auto extract = [&](const std::vector<Moments>& m, SeriesStats& stats) {
    stats.mean.resize(n_samples);
    stats.se.resize(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
      stats.mean[s] = m[s].mean;
      stats.se[s] = m[s].se();
    }
  };
  extract(x, out.x);
  extract(x2, out.x2);
  extract(p2, out.p2);
  extract(energy, out.energy);
  out.coherence_mean.resize(n_samples);
  out.coherence_se.resize(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    out.coherence_mean[s] = {coh_re[s].mean, coh_im[s].mean};
    const long cnt = coh_re[s].n;
    out.coherence_se[s] =
        cnt > 1 ? std::sqrt((coh_re[s].m2 + coh_im[s].m2) /
                            (static_cast<double>(cnt) * (cnt - 1)))
                : 0.0;
  }

  if (out.n_succeeded > 0) {
    const double inv = 1.0 / out.n_succeeded;
    for (auto& z : out.final_density.m) z *= inv;
    out.mean_abs_norm_drift = drift_mean_sum * inv;
  }
  out.final_density.time = initial.time + config.n_steps * config.dt;
  return out;
}

}  // namespace collapse
