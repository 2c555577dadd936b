#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "collapse/exclusion.hpp"
#include "collapse/sde.hpp"

namespace collapse {

// 64-bit FNV-1a over the bytes of s.
std::uint64_t fnv1a64(std::string_view s);

// Fixed-width lowercase hex.
std::string hex64(std::uint64_t v);

// Shortest round-trip-exact decimal ("%.17g"); infinities become "inf".
std::string format_double(double v);

// Hash of a canonical (compact, key-sorted) config JSON string.
std::string config_hash(const std::string& canonical_config_json);

// CSV with `# key=value` provenance comments, a header row, and one row
// per sample time.  Identical EnsembleStats + config produce identical
// bytes.
void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats,
                        const std::string& config_json,
                        const std::string& hash);

// JSON document with schema_version, config, config_hash and the result
// series.
void write_ensemble_json(std::ostream& out, const EnsembleStats& stats,
                         const std::string& config_json,
                         const std::string& hash);

// CSV of a combined exclusion boundary: r_c, lambda_star, binding source.
void write_region_csv(std::ostream& out, const CombinedExclusion& combined,
                      const std::string& config_json, const std::string& hash);

// Result of checking a file's embedded config hash.
struct VerifyResult {
  bool ok = false;
  std::string embedded;
  std::string recomputed;
  std::string detail;
};

// Re-hash the config embedded in a CSV ('# config=' comment) or JSON
// ('config' field) output and compare with the embedded hash.
VerifyResult verify_output_text(const std::string& text);
VerifyResult verify_output_file(const std::string& path);

}  // namespace collapse
