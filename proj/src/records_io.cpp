#include "collapse/records_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "collapse/constants.hpp"

namespace collapse {
namespace {

using nlohmann::json;

double require_number(const json& rec, const std::string& key,
                      const std::string& where) {
  const auto it = rec.find(key);
  if (it == rec.end())
    throw RecordSchemaError("missing field '" + key + "'", where);
  if (!it->is_number())
    throw RecordSchemaError("field '" + key + "' must be a number",
                            where + "/" + key);
  return it->get<double>();
}

}  // namespace

std::vector<ExperimentRecord> parse_experiment_records(
    const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw RecordSchemaError(std::string("invalid JSON: ") + e.what(), "/");
  }
  if (!doc.is_array())
    throw RecordSchemaError("records document must be a JSON array", "/");

  std::vector<ExperimentRecord> records;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "/" + std::to_string(i);
    const json& rec = doc[i];
    if (!rec.is_object())
      throw RecordSchemaError("record must be an object", where);

    ExperimentRecord out;
    const auto kind_it = rec.find("kind");
    if (kind_it == rec.end() || !kind_it->is_string())
      throw RecordSchemaError("missing string field 'kind'", where);
    const std::string kind = kind_it->get<std::string>();

    std::set<std::string> allowed = {"kind", "label", "mass_kg", "mass_amu"};
    if (kind == "interferometric_contrast") {
      out.kind = RecordKind::kInterferometricContrast;
      allowed.insert({"flight_time_s", "separation_m", "contrast_floor"});
    } else if (kind == "heating_bound") {
      out.kind = RecordKind::kHeatingBound;
      allowed.insert("power_ceiling_w");
    } else {
      throw RecordSchemaError("unknown kind '" + kind + "'", where + "/kind");
    }
    for (const auto& [key, value] : rec.items()) {
      if (!allowed.count(key))
        throw RecordSchemaError("unknown field '" + key + "'",
                                where + "/" + key);
    }

    const auto label_it = rec.find("label");
    if (label_it == rec.end() || !label_it->is_string())
      throw RecordSchemaError("missing string field 'label'", where);
    out.label = label_it->get<std::string>();

    const bool has_kg = rec.contains("mass_kg");
    const bool has_amu = rec.contains("mass_amu");
    if (has_kg == has_amu)
      throw RecordSchemaError("exactly one of mass_kg / mass_amu required",
                              where);
    out.mass = has_kg ? require_number(rec, "mass_kg", where)
                      : require_number(rec, "mass_amu", where) * kAmuKg;

    if (out.kind == RecordKind::kInterferometricContrast) {
      out.flight_time = require_number(rec, "flight_time_s", where);
      out.separation = require_number(rec, "separation_m", where);
      out.contrast_floor = require_number(rec, "contrast_floor", where);
    } else {
      const auto it = rec.find("power_ceiling_w");
      if (it == rec.end())
        throw RecordSchemaError("missing field 'power_ceiling_w'", where);
      if (it->is_string()) {
        if (it->get<std::string>() != "inf")
          throw RecordSchemaError(
              "power_ceiling_w string form must be \"inf\"",
              where + "/power_ceiling_w");
        out.power_ceiling = std::numeric_limits<double>::infinity();
      } else if (it->is_number()) {
        out.power_ceiling = it->get<double>();
      } else {
        throw RecordSchemaError("power_ceiling_w must be a number or \"inf\"",
                                where + "/power_ceiling_w");
      }
    }

    try {
      out.validate();
    } catch (const InvalidParameter& e) {
      throw RecordSchemaError(e.what(), where);
    }
    records.push_back(std::move(out));
  }
  return records;
}

std::vector<ExperimentRecord> load_experiment_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RecordSchemaError("cannot open records file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_records(buf.str());
}

}  // namespace collapse
