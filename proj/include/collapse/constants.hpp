#pragma once

#include "collapse/errors.hpp"

namespace collapse {

// Physical constants in SI units.  Defaults are the CODATA 2018 values.
// Every quantity in the library is SI unless a name says otherwise.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;    // reduced Planck constant [J s]
  double G = 6.67430e-11;           // Newton constant [m^3 kg^-1 s^-2]
  double m0 = 1.67262192369e-27;    // reference mass (proton) [kg]

  void validate() const {
    if (!(hbar > 0.0)) throw InvalidParameter("hbar must be > 0");
    if (!(G > 0.0)) throw InvalidParameter("G must be > 0");
    if (!(m0 > 0.0)) throw InvalidParameter("m0 must be > 0");
  }
};

inline constexpr PhysicalConstants kCodata2018{};

// One atomic mass unit [kg] (CODATA 2018), for CLI mass conversion.
inline constexpr double kAmuKg = 1.66053906660e-27;

}  // namespace collapse
