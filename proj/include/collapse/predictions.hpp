#pragma once

#include "collapse/constants.hpp"
#include "collapse/params.hpp"

namespace collapse {

// Matter-wave interferometry arm configuration: a particle of the given
// mass held in superposition across `separation` for `flight_time`.
struct InterferometricSetup {
  double mass = 0.0;         // [kg]
  double flight_time = 0.0;  // [s]
  double separation = 0.0;   // [m]

  void validate() const {
    if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
    if (!(flight_time >= 0.0))
      throw InvalidParameter("flight_time must be >= 0");
    if (!(separation >= 0.0))
      throw InvalidParameter("separation must be >= 0");
  }
};

// 1 - (sqrt(pi)/2) erf(u) / u, the geometry factor of the fringe-contrast
// exponent.  Monotone in u, -> 0 as u -> 0 and -> 1 as u -> inf.  Below
// u = 1e-4 the difference is evaluated by a four-term Taylor series to
// dodge the cancellation.
double contrast_bracket(double u);

// Fringe visibility multiplier after free flight:
//   exp(-lambda (m/m0)^2 t [1 - (sqrt(pi)/2) erf(u)/u]),  u = d / 2 r_c.
// Always in (0, 1]; equals 1 exactly at zero separation or zero time.
double contrast_reduction(const CslParams& p, const InterferometricSetup& s,
                          const PhysicalConstants& c = kCodata2018);

// Steady heating power of a free particle in three dimensions:
//   P = (3/4) hbar^2 lambda m / (m0^2 r_c^2).
// Each Cartesian direction contributes one third.
double heating_power(const CslParams& p, double mass,
                     const PhysicalConstants& c = kCodata2018);

// Same quantity for the gravitational kernel, assembled from three
// orthogonal 1-D momentum-diffusion channels:
//   P = hbar G m / (4 sqrt(pi) r0^3).
double dp_heating_power(const DpParams& p, double mass,
                        const PhysicalConstants& c = kCodata2018);

}  // namespace collapse
