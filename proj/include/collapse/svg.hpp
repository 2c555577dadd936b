#pragma once

#include <iosfwd>
#include <vector>

#include "collapse/exclusion.hpp"
#include "collapse/params.hpp"

namespace collapse {

// Log-log plot of exclusion boundaries in the (r_c, lambda) plane.
// Every individual region is drawn in its own color, the combined boundary
// in black with the excluded side shaded, and the continuous-localization
// presets as labeled points (with error bars where the preset carries an
// uncertainty band).  Output is plain standalone SVG with deterministic
// formatting: same inputs, same bytes.
void write_exclusion_svg(std::ostream& out, const CombinedExclusion& combined,
                         const std::vector<ExclusionRegion>& regions,
                         const std::vector<ParameterPreset>& presets);

}  // namespace collapse
