#pragma once

#include <complex>
#include <span>
#include <vector>

#include "collapse/errors.hpp"

namespace collapse {

// Iterative radix-2 transform on power-of-two lengths.
//
// Conventions (fixed, relied on throughout the noise sampler):
//   forward:  X_k = sum_j x_j exp(-2 pi i j k / n)   (no prefactor)
//   inverse:  x_j = (1/n) sum_k X_k exp(+2 pi i j k / n)
// so inverse(forward(x)) == x to round-off.
class Fft {
 public:
  explicit Fft(int n);

  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

  int size() const { return n_; }

 private:
  void transform(std::span<std::complex<double>> data, bool invert) const;

  int n_;
  std::vector<int> bitrev_;
};

}  // namespace collapse
