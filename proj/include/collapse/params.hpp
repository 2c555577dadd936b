#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "collapse/errors.hpp"

namespace collapse {

// Continuous-localization model parameters: collapse rate lambda [s^-1]
// and correlation length r_c [m].
struct CslParams {
  double lambda = 0.0;
  double r_c = 0.0;

  void validate() const {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be > 0");
    if (!(r_c > 0.0)) throw InvalidParameter("r_c must be > 0");
  }
};

// Gravitational-localization model parameter: regularization length r0 [m].
struct DpParams {
  double r0 = 0.0;

  void validate() const {
    if (!(r0 > 0.0)) throw InvalidParameter("r0 must be > 0");
  }
};

using ModelParams = std::variant<CslParams, DpParams>;

// A named point in parameter space, with citation text and (optionally)
// the half-width of the published uncertainty band in decades of lambda.
struct ParameterPreset {
  std::string name;
  ModelParams params;
  std::string provenance;
  std::optional<double> lambda_uncertainty_decades;
};

// Look up a preset by name (case-sensitive).  Throws UnknownPreset.
const ParameterPreset& preset(const std::string& name);

// All built-in presets, in a stable order.
const std::vector<ParameterPreset>& all_presets();

}  // namespace collapse
