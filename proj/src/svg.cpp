#include "collapse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace collapse {
namespace {

constexpr double kWidth = 860.0, kHeight = 640.0;
constexpr double kLeft = 90.0, kRight = 820.0;
constexpr double kTop = 50.0, kBottom = 560.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
  return buf;
}

struct LogAxis {
  double lo = 0.0, hi = 1.0;  // log10 range
  double a = 0.0, b = 1.0;    // pixel range

  double map(double value) const {
    const double t = (std::log10(value) - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_exclusion_svg(std::ostream& out, const CombinedExclusion& combined,
                         const std::vector<ExclusionRegion>& regions,
                         const std::vector<ParameterPreset>& presets) {
  LogAxis x;
  x.lo = std::floor(std::log10(combined.r_c.front()) + 1e-9);
  x.hi = std::ceil(std::log10(combined.r_c.back()) - 1e-9);
  x.a = kLeft;
  x.b = kRight;

  double lmin = std::numeric_limits<double>::infinity();
  double lmax = -std::numeric_limits<double>::infinity();
  auto widen = [&](double v) {
    if (!(v > 0.0) || std::isinf(v)) return;
    lmin = std::min(lmin, v);
    lmax = std::max(lmax, v);
  };
  for (const auto& r : regions)
    for (double v : r.lambda_star) widen(v);
  for (double v : combined.lambda_star) widen(v);
  for (const auto& p : presets) {
    if (const auto* csl = std::get_if<CslParams>(&p.params)) {
      const double band = p.lambda_uncertainty_decades.value_or(0.0);
      widen(csl->lambda * std::pow(10.0, -band));
      widen(csl->lambda * std::pow(10.0, band));
    }
  }
  if (!(lmin < lmax)) {
    lmin = 1e-20;
    lmax = 1.0;
  }
  LogAxis y;
  y.lo = std::floor(std::log10(lmin) - 0.2);
  y.hi = std::ceil(std::log10(lmax) + 0.2);
  y.a = kBottom;  // SVG y grows downward
  y.b = kTop;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth)
      << " " << num(kHeight) << "\">\n";
  out << "<rect width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n";

  // Decade grid.
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int d = static_cast<int>(x.lo); d <= static_cast<int>(x.hi); ++d) {
    const double px = x.map(std::pow(10.0, d));
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(px) << "\" y2=\"" << num(kBottom) << "\"/>\n";
  }
  for (int d = static_cast<int>(y.lo); d <= static_cast<int>(y.hi); ++d) {
    const double py = y.map(std::pow(10.0, d));
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py) << "\" x2=\""
        << num(kRight) << "\" y2=\"" << num(py) << "\"/>\n";
  }
  out << "</g>\n";

  // Tick labels (every other decade on y to avoid crowding).
  out << "<g font-family=\"monospace\" font-size=\"12\" fill=\"#333333\">\n";
  for (int d = static_cast<int>(x.lo); d <= static_cast<int>(x.hi); ++d) {
    const double px = x.map(std::pow(10.0, d));
    out << "<text x=\"" << num(px - 14.0) << "\" y=\"" << num(kBottom + 18.0)
        << "\">" << sci(d) << "</text>\n";
  }
  const int ystep = (static_cast<int>(y.hi) - static_cast<int>(y.lo) > 14)
                        ? 2
                        : 1;
  for (int d = static_cast<int>(y.lo); d <= static_cast<int>(y.hi);
       d += ystep) {
    const double py = y.map(std::pow(10.0, d));
    out << "<text x=\"" << num(kLeft - 52.0) << "\" y=\"" << num(py + 4.0)
        << "\">" << sci(d) << "</text>\n";
  }
  out << "<text x=\"" << num((kLeft + kRight) / 2.0 - 80.0) << "\" y=\""
      << num(kBottom + 40.0) << "\">correlation length r_c [m]</text>\n";
  out << "<text x=\"" << num(18.0) << "\" y=\"" << num(kTop - 14.0)
      << "\">collapse rate lambda [1/s]</text>\n";
  out << "</g>\n";

  // Shade the excluded side (above the combined boundary), one polygon per
  // contiguous finite run.
  const auto& grid = combined.r_c;
  std::size_t i = 0;
  while (i < grid.size()) {
    while (i < grid.size() && std::isinf(combined.lambda_star[i])) ++i;
    std::size_t j = i;
    while (j < grid.size() && !std::isinf(combined.lambda_star[j])) ++j;
    if (j > i + 1) {
      out << "<polygon fill=\"#d62728\" fill-opacity=\"0.10\" "
             "stroke=\"none\" points=\"";
      for (std::size_t k = i; k < j; ++k)
        out << num(x.map(grid[k])) << ","
            << num(y.map(std::min(combined.lambda_star[k],
                                  std::pow(10.0, y.hi))))
            << " ";
      out << num(x.map(grid[j - 1])) << "," << num(kTop) << " "
          << num(x.map(grid[i])) << "," << num(kTop);
      out << "\"/>\n";
    }
    i = j;
  }

  // Individual boundaries.
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const char* color = kPalette[r % (sizeof kPalette / sizeof *kPalette)];
    const auto& region = regions[r];
    out << "<g stroke=\"" << color
        << "\" stroke-width=\"1.5\" fill=\"none\">\n";
    std::size_t k = 0;
    while (k < region.r_c.size()) {
      while (k < region.r_c.size() && std::isinf(region.lambda_star[k])) ++k;
      std::size_t e = k;
      while (e < region.r_c.size() && !std::isinf(region.lambda_star[e])) ++e;
      if (e > k + 1) {
        out << "<polyline points=\"";
        for (std::size_t q = k; q < e; ++q)
          out << num(x.map(region.r_c[q])) << ","
              << num(std::max(y.map(std::min(region.lambda_star[q],
                                             std::pow(10.0, y.hi))),
                              kTop))
              << " ";
        out << "\"/>\n";
      }
      k = e;
    }
    out << "</g>\n";
    out << "<text font-family=\"monospace\" font-size=\"12\" fill=\"" << color
        << "\" x=\"" << num(kLeft + 12.0) << "\" y=\""
        << num(kTop + 18.0 + 16.0 * static_cast<double>(r)) << "\">"
        << escape(region.source) << "</text>\n";
  }

  // Combined boundary on top.
  out << "<g stroke=\"#000000\" stroke-width=\"2.5\" fill=\"none\">\n";
  i = 0;
  while (i < grid.size()) {
    while (i < grid.size() && std::isinf(combined.lambda_star[i])) ++i;
    std::size_t j = i;
    while (j < grid.size() && !std::isinf(combined.lambda_star[j])) ++j;
    if (j > i + 1) {
      out << "<polyline points=\"";
      for (std::size_t k = i; k < j; ++k)
        out << num(x.map(grid[k])) << ","
            << num(std::max(y.map(std::min(combined.lambda_star[k],
                                           std::pow(10.0, y.hi))),
                            kTop))
            << " ";
      out << "\"/>\n";
    }
    i = j;
  }
  out << "</g>\n";

  // Preset markers.
  for (const auto& p : presets) {
    const auto* csl = std::get_if<CslParams>(&p.params);
    if (!csl) continue;
    const double px = x.map(csl->r_c);
    const double py = y.map(csl->lambda);
    if (p.lambda_uncertainty_decades) {
      const double band = *p.lambda_uncertainty_decades;
      const double y1 = y.map(csl->lambda * std::pow(10.0, band));
      const double y2 = y.map(csl->lambda * std::pow(10.0, -band));
      out << "<g stroke=\"#555555\" stroke-width=\"1.2\">\n";
      out << "<line x1=\"" << num(px) << "\" y1=\"" << num(y1) << "\" x2=\""
          << num(px) << "\" y2=\"" << num(y2) << "\"/>\n";
      out << "<line x1=\"" << num(px - 5.0) << "\" y1=\"" << num(y1)
          << "\" x2=\"" << num(px + 5.0) << "\" y2=\"" << num(y1) << "\"/>\n";
      out << "<line x1=\"" << num(px - 5.0) << "\" y1=\"" << num(y2)
          << "\" x2=\"" << num(px + 5.0) << "\" y2=\"" << num(y2) << "\"/>\n";
      out << "</g>\n";
    }
    out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
        << "\" r=\"4\" fill=\"#000000\"/>\n";
    out << "<text font-family=\"monospace\" font-size=\"12\" fill=\"#000000\" "
           "x=\""
        << num(px + 8.0) << "\" y=\"" << num(py - 6.0) << "\">"
        << escape(p.name) << "</text>\n";
  }

  out << "</svg>\n";
}

}  // namespace collapse
