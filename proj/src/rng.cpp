#include "collapse/rng.hpp"

#include <cmath>
#include <numbers>

namespace collapse {
namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return ((x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(
    std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

NormalStream::NormalStream(SeedPath path) : path_(path) {}

void NormalStream::pair(double& z0, double& z1) {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(path_.stream),
      static_cast<std::uint32_t>(path_.stream >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(path_.master_seed),
      static_cast<std::uint32_t>(path_.master_seed >> 32)};
  const auto r = Philox4x32::block(counter, key);
  ++block_;
  const double u1 = to_open_unit(r[0], r[1]);
  const double u2 = to_open_unit(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  z0 = radius * std::cos(angle);
  z1 = radius * std::sin(angle);
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double z0, z1;
  pair(z0, z1);
  cached_ = z1;
  has_cached_ = true;
  return z0;
}

void NormalStream::fill(std::span<double> out) {
  std::size_t i = 0;
  if (has_cached_ && i < out.size()) {
    out[i++] = cached_;
    has_cached_ = false;
  }
  while (i + 1 < out.size()) {
    pair(out[i], out[i + 1]);
    i += 2;
  }
  if (i < out.size()) {
    double z0, z1;
    pair(z0, z1);
    out[i] = z0;
    cached_ = z1;
    has_cached_ = true;
  }
}

}  // namespace collapse
