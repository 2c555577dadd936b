#pragma once

#include <complex>
#include <span>
#include <vector>

#include "collapse/fft.hpp"
#include "collapse/grid.hpp"
#include "collapse/kernels.hpp"
#include "collapse/rng.hpp"

namespace collapse {

// One spatially correlated Gaussian increment field: increments[i] has
// E[w_i] = 0 and E[w_i w_j] = D(x_i - x_j) dt with minimum-image distances.
struct NoiseField {
  std::vector<double> increments;
  double dt = 0.0;
  SeedPath seed_path;
};

// Circulant square root of a kernel sampled on a periodic grid:
// factor[k] = sqrt(max(F_k, 0)) where F = DFT of the sampled kernel row.
// Eigenvalues in [-1e-12 * D(0), 0) are treated as round-off and clipped;
// anything lower throws NotPositiveSemidefinite.
std::vector<double> spectral_factor(const NoiseKernel& kernel,
                                    const GridSpec& grid);

// Kernel sampled on a grid, with its circulant spectral data.  Immutable
// after construction and safe to share across threads; the sampling and
// convolution entry points write only into caller-supplied buffers.
class KernelContext {
 public:
  KernelContext(const NoiseKernel& kernel, const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double value_at_zero() const { return row_[0]; }

  // Kernel at minimum-image lags: row[j] = D(min(j, n-j) dx).
  const std::vector<double>& row() const { return row_; }
  // Circulant eigenvalues F_k (clipped to >= 0; see spectral_factor).
  const std::vector<double>& spectrum() const { return spectrum_; }
  // sqrt of spectrum.
  const std::vector<double>& factor() const { return factor_; }

  // out = circular convolution of q with the kernel row: out_i =
  // sum_j D(x_i - x_j) q_j.  work must hold n complex values.
  void convolve_into(std::span<const double> q, std::span<double> out,
                     std::span<std::complex<double>> work) const;

  // Draw one increment field into out (n doubles); work as above.
  // Consumes exactly n normal deviates from rng.
  void sample_into(double dt, NormalStream& rng, std::span<double> out,
                   std::span<std::complex<double>> work) const;

  // Allocating convenience wrapper around sample_into.
  NoiseField sample_increment(double dt, NormalStream& rng) const;

 private:
  GridSpec grid_;
  std::vector<double> row_;
  std::vector<double> spectrum_;
  std::vector<double> factor_;
  Fft fft_;
};

}  // namespace collapse
