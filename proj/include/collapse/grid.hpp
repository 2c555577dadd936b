#pragma once

#include <cmath>

#include "collapse/errors.hpp"

namespace collapse {

// Uniform periodic 1-D grid.  Positions are centered on the box:
// x_i = (i - n/2) dx, i = 0 .. n-1.  Distances are minimum-image.
// n must be a power of two >= 8 so the spectral machinery applies exactly.
struct GridSpec {
  int n_points = 0;
  double dx = 0.0;  // spacing [m]

  void validate() const {
    if (n_points < 8 || (n_points & (n_points - 1)) != 0)
      throw InvalidParameter("n_points must be a power of two >= 8");
    if (!(dx > 0.0) || !std::isfinite(dx))
      throw InvalidParameter("dx must be finite and > 0");
  }

  double length() const { return n_points * dx; }

  double position(int i) const { return (i - n_points / 2) * dx; }

  // Minimum-image separation between sites i and j [m].
  double periodic_distance(int i, int j) const {
    int d = i - j;
    if (d < 0) d = -d;
    d %= n_points;
    if (d > n_points / 2) d = n_points - d;
    return d * dx;
  }

  bool operator==(const GridSpec&) const = default;
};

}  // namespace collapse
