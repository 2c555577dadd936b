#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace collapse {

// Counter-based block cipher PRNG (4x32 lanes, 10 rounds).  A (counter, key)
// pair maps to four 32-bit words; distinct counters give independent draws,
// so streams are indexed rather than seeded sequentially.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(
      std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);
};

// Address of an independent random stream: all streams with the same
// master_seed and different stream indices are non-overlapping by
// construction (the stream index occupies the high counter words).
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;

  bool operator==(const SeedPath&) const = default;
};

// Standard-normal generator over a Philox stream.  One cipher block yields
// two doubles via the polar-free Box-Muller map; uniforms are taken as
// ((x >> 11) + 0.5) * 2^-53 so they never hit 0 or 1.  Consumption is
// deterministic: fill(k) with k even always advances exactly k/2 blocks.
class NormalStream {
 public:
  explicit NormalStream(SeedPath path);

  double next();
  void fill(std::span<double> out);

  const SeedPath& path() const { return path_; }
  std::uint64_t blocks_used() const { return block_; }

 private:
  void pair(double& z0, double& z1);

  SeedPath path_;
  std::uint64_t block_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace collapse
