#include "collapse/kernels.hpp"

#include <cmath>

namespace collapse {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

}  // namespace

NoiseKernel csl_kernel(const CslParams& p, const PhysicalConstants& c) {
  p.validate();
  c.validate();
  const double amp = p.lambda / (c.m0 * c.m0);
  const double r_c = p.r_c;
  NoiseKernel k;
  k.evaluate = [amp, r_c](double u) {
    const double z = u / (2.0 * r_c);
    return amp * std::exp(-z * z);
  };
  k.value_at_zero = amp;
  k.curvature_at_zero = -amp / (2.0 * r_c * r_c);
  k.correlation_length = r_c;
  k.label = "csl";
  return k;
}

NoiseKernel dp_kernel(const DpParams& p, const PhysicalConstants& c) {
  p.validate();
  c.validate();
  const double amp = c.G / c.hbar;
  const double r0 = p.r0;
  NoiseKernel k;
  // erf(z)/u with z = |u|/2r0.  Near the origin use the Maclaurin series of
  // erf to avoid 0/0; the crossover at z = 1e-4 keeps the truncation error
  // below 1e-17 relative.
  k.evaluate = [amp, r0](double u) {
    const double au = std::fabs(u);
    const double z = au / (2.0 * r0);
    if (z < 1e-4) {
      const double z2 = z * z;
      return amp / (kSqrtPi * r0) * (1.0 - z2 / 3.0 + z2 * z2 / 10.0);
    }
    return amp * std::erf(z) / au;
  };
  k.value_at_zero = amp / (kSqrtPi * r0);
  k.curvature_at_zero = -amp / (6.0 * kSqrtPi * r0 * r0 * r0);
  k.correlation_length = r0;
  k.label = "dp";
  return k;
}

NoiseKernel zero_kernel() {
  NoiseKernel k;
  k.evaluate = [](double) { return 0.0; };
  k.value_at_zero = 0.0;
  k.curvature_at_zero = 0.0;
  k.correlation_length = std::nullopt;
  k.label = "zero";
  return k;
}

NoiseKernel kernel_for(const ModelParams& p, const PhysicalConstants& c) {
  if (const auto* csl = std::get_if<CslParams>(&p)) return csl_kernel(*csl, c);
  return dp_kernel(std::get<DpParams>(p), c);
}

}  // namespace collapse
