#include "collapse/fft.hpp"

#include <cmath>
#include <numbers>

namespace collapse {

Fft::Fft(int n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw InvalidParameter("fft length must be a power of two >= 2");
  bitrev_.resize(n);
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < log2n; ++b)
      if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
    bitrev_[i] = r;
  }
}

void Fft::transform(std::span<std::complex<double>> data, bool invert) const {
  if (static_cast<int>(data.size()) != n_)
    throw DimensionMismatch("fft buffer length does not match plan");
  for (int i = 0; i < n_; ++i) {
    const int j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = invert ? 1.0 : -1.0;
  for (int len = 2; len <= n_; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / len;
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n_; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        const std::complex<double> u = data[i + j];
        const std::complex<double> v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (invert) {
    const double inv = 1.0 / n_;
    for (auto& z : data) z *= inv;
  }
}

void Fft::forward(std::span<std::complex<double>> data) const {
  transform(data, false);
}

void Fft::inverse(std::span<std::complex<double>> data) const {
  transform(data, true);
}

}  // namespace collapse
