#include "collapse/noise.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace collapse {
namespace {

std::vector<double> sample_row(const NoiseKernel& kernel,
                               const GridSpec& grid) {
  grid.validate();
  const int n = grid.n_points;
  std::vector<double> row(n);
  for (int j = 0; j < n; ++j) row[j] = kernel(grid.periodic_distance(j, 0));
  return row;
}

std::vector<double> row_spectrum(const std::vector<double>& row,
                                 double d0) {
  const int n = static_cast<int>(row.size());
  Fft fft(n);
  std::vector<std::complex<double>> buf(row.begin(), row.end());
  fft.forward(buf);
  const double tol = 1e-12 * d0;
  std::vector<double> spectrum(n);
  for (int k = 0; k < n; ++k) {
    const double f = buf[k].real();
    if (f < -tol)
      throw NotPositiveSemidefinite(
          "kernel spectrum has eigenvalue " + std::to_string(f) +
          " at mode " + std::to_string(k) + " (tolerance " +
          std::to_string(-tol) +
          "); periodic truncation of the kernel usually causes this -- "
          "try a longer grid");
    spectrum[k] = f > 0.0 ? f : 0.0;
  }
  return spectrum;
}

}  // namespace

std::vector<double> spectral_factor(const NoiseKernel& kernel,
                                    const GridSpec& grid) {
  const auto row = sample_row(kernel, grid);
  auto spectrum = row_spectrum(row, row[0]);
  for (auto& f : spectrum) f = std::sqrt(f);
  return spectrum;
}

KernelContext::KernelContext(const NoiseKernel& kernel, const GridSpec& grid)
    : grid_(grid),
      row_(sample_row(kernel, grid)),
      spectrum_(row_spectrum(row_, row_[0])),
      factor_(spectrum_.size()),
      fft_(grid.n_points) {
  for (std::size_t k = 0; k < spectrum_.size(); ++k)
    factor_[k] = std::sqrt(spectrum_[k]);
  // Guidance only: a box shorter than ~10 correlation lengths makes the
  // periodic images of the kernel overlap noticeably.
  if (kernel.correlation_length &&
      grid.length() < 10.0 * *kernel.correlation_length) {
    std::fprintf(stderr,
                 "warning: grid length %.3e m is below 10 correlation "
                 "lengths (%.3e m); periodic kernel images overlap\n",
                 grid.length(), 10.0 * *kernel.correlation_length);
  }
}

void KernelContext::convolve_into(std::span<const double> q,
                                  std::span<double> out,
                                  std::span<std::complex<double>> work) const {
  const int n = grid_.n_points;
  if (static_cast<int>(q.size()) != n || static_cast<int>(out.size()) != n ||
      static_cast<int>(work.size()) != n)
    throw DimensionMismatch("convolve buffers must match grid size");
  for (int i = 0; i < n; ++i) work[i] = q[i];
  fft_.forward(work);
  for (int k = 0; k < n; ++k) work[k] *= spectrum_[k];
  fft_.inverse(work);
  for (int i = 0; i < n; ++i) out[i] = work[i].real();
}

void KernelContext::sample_into(double dt, NormalStream& rng,
                                std::span<double> out,
                                std::span<std::complex<double>> work) const {
  const int n = grid_.n_points;
  if (static_cast<int>(out.size()) != n || static_cast<int>(work.size()) != n)
    throw DimensionMismatch("sample buffers must match grid size");
  if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
  rng.fill(out);
  for (int i = 0; i < n; ++i) work[i] = out[i];
  fft_.forward(work);
  // w = IDFT(sqrt(F) . DFT(xi)) sqrt(dt); the factor is even in k, so the
  // spectrum stays Hermitian and w is real to round-off.
  const double root_dt = std::sqrt(dt);
  for (int k = 0; k < n; ++k) work[k] *= factor_[k] * root_dt;
  fft_.inverse(work);
  for (int i = 0; i < n; ++i) out[i] = work[i].real();
}

NoiseField KernelContext::sample_increment(double dt, NormalStream& rng) const {
  NoiseField field;
  field.dt = dt;
  field.seed_path = rng.path();
  field.increments.resize(grid_.n_points);
  std::vector<std::complex<double>> work(grid_.n_points);
  sample_into(dt, rng, field.increments, work);
  return field;
}

}  // namespace collapse
