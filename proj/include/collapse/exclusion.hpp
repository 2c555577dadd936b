#pragma once

#include <span>
#include <string>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/params.hpp"

namespace collapse {

enum class RecordKind { kInterferometricContrast, kHeatingBound };

// One experimental bound, as read from a records file.
//
// interferometric_contrast: fringe contrast >= contrast_floor was observed
// for a particle of `mass` in superposition across `separation` for
// `flight_time`.  Parameter points predicting less contrast are excluded.
//
// heating_bound: the energy gain of a particle of `mass` was below
// power_ceiling (may be +inf).  Parameter points predicting more heating
// are excluded.
struct ExperimentRecord {
  RecordKind kind = RecordKind::kInterferometricContrast;
  std::string label;
  double mass = 0.0;           // [kg]
  double flight_time = 0.0;    // [s]
  double separation = 0.0;     // [m]
  double contrast_floor = 0.0; // in [0, 1)
  double power_ceiling = 0.0;  // [W], +inf allowed

  void validate() const;
};

// Upper boundary of the allowed region in (r_c, lambda) space for one
// record: parameter points with lambda > lambda_star[i] at r_c[i] are
// excluded.  +inf marks "no constraint at this r_c".
struct ExclusionRegion {
  std::string source;
  std::vector<double> r_c;
  std::vector<double> lambda_star;
};

// 200 log-spaced points covering 1e-9 m .. 1e-3 m.
std::vector<double> default_rc_grid();
std::vector<double> log_grid(double lo, double hi, int n);

// Invert the heating-power prediction:
//   lambda_star(r_c) = (4/3) ceiling m0^2 r_c^2 / (hbar^2 mass).
ExclusionRegion exclusion_from_heating(const ExperimentRecord& rec,
                                       std::span<const double> rc_grid,
                                       const PhysicalConstants& c =
                                           kCodata2018);

// Invert the contrast prediction:
//   lambda_star(r_c) = -ln(floor) / ((m/m0)^2 t B(d / 2 r_c)).
ExclusionRegion exclusion_from_contrast(const ExperimentRecord& rec,
                                        std::span<const double> rc_grid,
                                        const PhysicalConstants& c =
                                            kCodata2018);

// Pointwise minimum over regions, remembering which record binds where.
struct CombinedExclusion {
  std::vector<double> r_c;
  std::vector<double> lambda_star;
  std::vector<int> binding;          // index into sources, -1 if unbounded
  std::vector<std::string> sources;
};

CombinedExclusion combine_regions(const std::vector<ExclusionRegion>& regions);

struct ExclusionVerdict {
  bool excluded = false;
  double lambda_star = 0.0;  // interpolated boundary at the queried r_c
  std::string binding_source;
};

// Strict test lambda > lambda_star(r_c), with lambda_star interpolated
// log-linearly between grid points.  Throws OutOfGridRange when r_c falls
// outside the tabulated grid.
ExclusionVerdict is_excluded(const CslParams& p,
                             const CombinedExclusion& combined);

// Gravitational-kernel analogue of the heating inversion.  The predicted
// power falls off as r0^-3, so a ceiling excludes r0 below some r0_star.
struct DpHeatingExclusion {
  bool any_excluded = false;
  bool entire_range = false;
  double r0_star = 0.0;  // [m]; exclusion is r0 < r0_star
  std::string source;
};

// Bisect the monotone power curve on [r0_lo, r0_hi] to 1e-3 relative.
DpHeatingExclusion dp_exclusion_from_heating(const ExperimentRecord& rec,
                                             double r0_lo, double r0_hi,
                                             const PhysicalConstants& c =
                                                 kCodata2018);

}  // namespace collapse
