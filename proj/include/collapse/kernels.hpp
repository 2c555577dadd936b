#pragma once

#include <functional>
#include <optional>
#include <string>

#include "collapse/constants.hpp"
#include "collapse/params.hpp"

namespace collapse {

// Spatial correlation function D(u) of the collapse noise, evaluated at a
// separation u [m].  Values have units of s^-1 kg^-2: the noise increments
// on a grid satisfy E[w_i w_j] = D(x_i - x_j) dt.
//
// D must be even, positive semidefinite and maximal at u = 0.
// curvature_at_zero = D''(0) [s^-1 kg^-2 m^-2] is set when the kernel is
// twice differentiable at the origin; it drives the closed-form momentum
// diffusion rate.  correlation_length is a length scale used for grid
// sizing guidance only.
struct NoiseKernel {
  std::function<double(double)> evaluate;
  double value_at_zero = 0.0;
  std::optional<double> curvature_at_zero;
  std::optional<double> correlation_length;
  std::string label;

  double operator()(double u) const { return evaluate(u); }
};

// Gaussian kernel D(u) = (lambda/m0^2) exp(-u^2 / 4 r_c^2).
NoiseKernel csl_kernel(const CslParams& p,
                       const PhysicalConstants& c = kCodata2018);

// Gravitational kernel D(u) = (G/hbar) erf(|u| / 2 r0) / |u|, with the
// u -> 0 limit (G/hbar) / (sqrt(pi) r0) taken analytically.
NoiseKernel dp_kernel(const DpParams& p,
                      const PhysicalConstants& c = kCodata2018);

// Identically-zero kernel: collapse terms switched off.
NoiseKernel zero_kernel();

// Dispatch on the model variant.
NoiseKernel kernel_for(const ModelParams& p,
                       const PhysicalConstants& c = kCodata2018);

}  // namespace collapse
