#include "collapse/exclusion.hpp"

#include <cmath>
#include <limits>

#include "collapse/predictions.hpp"

namespace collapse {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw InvalidParameter("grid needs >= 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw InvalidParameter("grid values must be > 0");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw InvalidParameter("grid must be strictly increasing");
  }
}

}  // namespace

void ExperimentRecord::validate() const {
  if (!(mass > 0.0)) throw InvalidParameter("record mass must be > 0");
  if (kind == RecordKind::kInterferometricContrast) {
    if (!(flight_time > 0.0))
      throw InvalidParameter("flight_time must be > 0");
    if (!(separation > 0.0)) throw InvalidParameter("separation must be > 0");
    if (!(contrast_floor >= 0.0 && contrast_floor < 1.0))
      throw InvalidParameter("contrast_floor must be in [0, 1)");
  } else {
    if (std::isnan(power_ceiling) || !(power_ceiling > 0.0))
      throw InvalidParameter("power_ceiling must be > 0 (inf allowed)");
  }
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidParameter("need 0 < lo < hi");
  if (n < 2) throw InvalidParameter("need n >= 2 grid points");
  std::vector<double> g(n);
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + i * step);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_rc_grid() { return log_grid(1e-9, 1e-3, 200); }

ExclusionRegion exclusion_from_heating(const ExperimentRecord& rec,
                                       std::span<const double> rc_grid,
                                       const PhysicalConstants& c) {
  rec.validate();
  c.validate();
  check_grid(rc_grid);
  if (rec.kind != RecordKind::kHeatingBound)
    throw WrongRecordKind("record '" + rec.label + "' is not a heating bound");
  ExclusionRegion region;
  region.source = rec.label;
  region.r_c.assign(rc_grid.begin(), rc_grid.end());
  region.lambda_star.resize(rc_grid.size());
  const double scale = std::isinf(rec.power_ceiling)
                           ? kInf
                           : 4.0 * rec.power_ceiling * c.m0 * c.m0 /
                                 (3.0 * c.hbar * c.hbar * rec.mass);
  for (std::size_t i = 0; i < rc_grid.size(); ++i)
    region.lambda_star[i] =
        std::isinf(scale) ? kInf : scale * rc_grid[i] * rc_grid[i];
  return region;
}

ExclusionRegion exclusion_from_contrast(const ExperimentRecord& rec,
                                        std::span<const double> rc_grid,
                                        const PhysicalConstants& c) {
  rec.validate();
  c.validate();
  check_grid(rc_grid);
  if (rec.kind != RecordKind::kInterferometricContrast)
    throw WrongRecordKind("record '" + rec.label +
                          "' is not an interferometric bound");
  ExclusionRegion region;
  region.source = rec.label;
  region.r_c.assign(rc_grid.begin(), rc_grid.end());
  region.lambda_star.resize(rc_grid.size());
  const double ratio = rec.mass / c.m0;
  const double log_floor =
      rec.contrast_floor > 0.0 ? -std::log(rec.contrast_floor) : kInf;
  for (std::size_t i = 0; i < rc_grid.size(); ++i) {
    const double u = rec.separation / (2.0 * rc_grid[i]);
    const double k = ratio * ratio * rec.flight_time * contrast_bracket(u);
    region.lambda_star[i] =
        (std::isinf(log_floor) || k <= 0.0) ? kInf : log_floor / k;
  }
  return region;
}

CombinedExclusion combine_regions(
    const std::vector<ExclusionRegion>& regions) {
  if (regions.empty()) throw InvalidParameter("no regions to combine");
  const std::vector<double>& grid = regions.front().r_c;
  check_grid(grid);
  CombinedExclusion out;
  out.r_c = grid;
  out.lambda_star.assign(grid.size(), kInf);
  out.binding.assign(grid.size(), -1);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const ExclusionRegion& region = regions[r];
    if (region.r_c != grid)
      throw GridMismatch("regions tabulated on different grids");
    out.sources.push_back(region.source);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (region.lambda_star[i] < out.lambda_star[i]) {
        out.lambda_star[i] = region.lambda_star[i];
        out.binding[i] = static_cast<int>(r);
      }
    }
  }
  return out;
}

ExclusionVerdict is_excluded(const CslParams& p,
                             const CombinedExclusion& combined) {
  p.validate();
  const std::vector<double>& grid = combined.r_c;
  if (grid.size() < 2) throw InvalidParameter("combined region is empty");
  if (p.r_c < grid.front() || p.r_c > grid.back())
    throw OutOfGridRange("r_c outside tabulated range [" +
                         std::to_string(grid.front()) + ", " +
                         std::to_string(grid.back()) + "]");
  std::size_t hi = 1;
  while (hi + 1 < grid.size() && grid[hi] < p.r_c) ++hi;
  const std::size_t lo = hi - 1;

  ExclusionVerdict v;
  const double l_lo = combined.lambda_star[lo];
  const double l_hi = combined.lambda_star[hi];
  if (std::isinf(l_lo) || std::isinf(l_hi)) {
    // Unbounded on either side of the cell: no finite boundary to cross.
    v.lambda_star = kInf;
    v.excluded = false;
  } else {
    const double f = (std::log(p.r_c) - std::log(grid[lo])) /
                     (std::log(grid[hi]) - std::log(grid[lo]));
    v.lambda_star =
        std::exp((1.0 - f) * std::log(l_lo) + f * std::log(l_hi));
    v.excluded = p.lambda > v.lambda_star;
  }
  if (v.excluded) {
    // Attribute to the nearer grid point's binding record.
    const double mid = std::sqrt(grid[lo] * grid[hi]);
    const int b = combined.binding[p.r_c <= mid ? lo : hi];
    if (b >= 0) v.binding_source = combined.sources[b];
  }
  return v;
}

DpHeatingExclusion dp_exclusion_from_heating(const ExperimentRecord& rec,
                                             double r0_lo, double r0_hi,
                                             const PhysicalConstants& c) {
  rec.validate();
  c.validate();
  if (rec.kind != RecordKind::kHeatingBound)
    throw WrongRecordKind("record '" + rec.label + "' is not a heating bound");
  if (!(r0_lo > 0.0) || !(r0_hi > r0_lo))
    throw InvalidParameter("need 0 < r0_lo < r0_hi");

  DpHeatingExclusion out;
  out.source = rec.label;
  if (std::isinf(rec.power_ceiling)) return out;  // nothing excluded

  auto power = [&](double r0) {
    return dp_heating_power(DpParams{r0}, rec.mass, c);
  };
  // Power decreases with r0: small r0 heats hardest.
  if (power(r0_lo) <= rec.power_ceiling) return out;
  out.any_excluded = true;
  if (power(r0_hi) > rec.power_ceiling) {
    out.entire_range = true;
    out.r0_star = r0_hi;
    return out;
  }
  double lo = r0_lo, hi = r0_hi;
  while ((hi - lo) / hi > 1e-3) {
    const double mid = std::sqrt(lo * hi);
    if (power(mid) > rec.power_ceiling)
      lo = mid;
    else
      hi = mid;
  }
  out.r0_star = std::sqrt(lo * hi);
  return out;
}

}  // namespace collapse
