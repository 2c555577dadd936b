#include "collapse/params.hpp"

namespace collapse {

const std::vector<ParameterPreset>& all_presets() {
  static const std::vector<ParameterPreset> presets = {
      {"GRW", CslParams{1e-16, 1e-7},
       "historical localization-rate and length proposal", std::nullopt},
      {"Adler-A", CslParams{4e-8, 1e-7},
       "latent-image formation estimate, quoted to +/- 2 decades", 2.0},
      {"Adler-B", CslParams{1e-6, 1e-6},
       "latent-image formation estimate, quoted to +/- 2 decades", 2.0},
      {"DP-Diosi", DpParams{1e-15},
       "nuclear-size regularization cutoff", std::nullopt},
  };
  return presets;
}

const ParameterPreset& preset(const std::string& name) {
  for (const auto& p : all_presets()) {
    if (p.name == name) return p;
  }
  throw UnknownPreset("unknown preset '" + name + "'");
}

}  // namespace collapse
