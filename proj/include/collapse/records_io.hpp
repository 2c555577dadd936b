#pragma once

#include <string>
#include <vector>

#include "collapse/exclusion.hpp"

namespace collapse {

// Parse an experiment-records document:
//
// [
//   {"kind": "interferometric_contrast", "label": "...",
//    "mass_kg": 1.2e-22 | "mass_amu": 7e4,
//    "flight_time_s": 0.5, "separation_m": 2.5e-7, "contrast_floor": 0.9},
//   {"kind": "heating_bound", "label": "...",
//    "mass_kg": 1e-3, "power_ceiling_w": 1e-15 | "inf"}
// ]
//
// Exactly one of mass_kg / mass_amu per record.  Unknown keys are rejected.
// All problems raise RecordSchemaError naming the offending location.
std::vector<ExperimentRecord> parse_experiment_records(
    const std::string& json_text);

std::vector<ExperimentRecord> load_experiment_records(
    const std::string& path);

}  // namespace collapse
