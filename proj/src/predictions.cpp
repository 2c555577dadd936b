#include "collapse/predictions.hpp"

#include <cmath>

#include "collapse/kernels.hpp"
#include "collapse/master.hpp"

namespace collapse {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

}  // namespace

double contrast_bracket(double u) {
  if (!(u >= 0.0)) throw InvalidParameter("u must be >= 0");
  if (u < 1e-4) {
    const double u2 = u * u;
    return u2 / 3.0 - u2 * u2 / 10.0 + u2 * u2 * u2 / 42.0 -
           u2 * u2 * u2 * u2 / 216.0;
  }
  return 1.0 - 0.5 * kSqrtPi * std::erf(u) / u;
}

double contrast_reduction(const CslParams& p, const InterferometricSetup& s,
                          const PhysicalConstants& c) {
  p.validate();
  s.validate();
  c.validate();
  const double u = s.separation / (2.0 * p.r_c);
  const double ratio = s.mass / c.m0;
  const double exponent =
      p.lambda * ratio * ratio * s.flight_time * contrast_bracket(u);
  return std::exp(-exponent);
}

double heating_power(const CslParams& p, double mass,
                     const PhysicalConstants& c) {
  p.validate();
  c.validate();
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  return 0.75 * c.hbar * c.hbar * p.lambda * mass /
         (c.m0 * c.m0 * p.r_c * p.r_c);
}

double dp_heating_power(const DpParams& p, double mass,
                        const PhysicalConstants& c) {
  return 3.0 * heating_rate_1d(dp_kernel(p, c), mass, c);
}

}  // namespace collapse
