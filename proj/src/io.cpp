#include "collapse/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace collapse {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string config_hash(const std::string& canonical_config_json) {
  return hex64(fnv1a64(canonical_config_json));
}

void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats,
                        const std::string& config_json,
                        const std::string& hash) {
  out << "# collapsim ensemble v1\n";
  out << "# config_hash=" << hash << "\n";
  out << "# config=" << config_json << "\n";
  out << "# trajectories_succeeded=" << stats.n_succeeded << "/"
      << stats.n_requested << "\n";
  out << "time,mean_x,se_x,mean_x2,se_x2,mean_p2,se_p2,mean_energy,"
         "se_energy,coherence_re,coherence_im,se_coherence\n";
  for (std::size_t s = 0; s < stats.times.size(); ++s) {
    out << format_double(stats.times[s]) << ','
        << format_double(stats.x.mean[s]) << ','
        << format_double(stats.x.se[s]) << ','
        << format_double(stats.x2.mean[s]) << ','
        << format_double(stats.x2.se[s]) << ','
        << format_double(stats.p2.mean[s]) << ','
        << format_double(stats.p2.se[s]) << ','
        << format_double(stats.energy.mean[s]) << ','
        << format_double(stats.energy.se[s]) << ','
        << format_double(stats.coherence_mean[s].real()) << ','
        << format_double(stats.coherence_mean[s].imag()) << ','
        << format_double(stats.coherence_se[s]) << "\n";
  }
}

void write_ensemble_json(std::ostream& out, const EnsembleStats& stats,
                         const std::string& config_json,
                         const std::string& hash) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "ensemble_summary";
  doc["config"] = nlohmann::json::parse(config_json);
  doc["config_hash"] = hash;
  nlohmann::json& r = doc["results"];
  r["n_requested"] = stats.n_requested;
  r["n_succeeded"] = stats.n_succeeded;
  r["mean_abs_norm_drift"] = stats.mean_abs_norm_drift;
  r["max_abs_norm_drift"] = stats.max_abs_norm_drift;
  r["times"] = stats.times;
  r["mean_x"] = stats.x.mean;
  r["se_x"] = stats.x.se;
  r["mean_x2"] = stats.x2.mean;
  r["se_x2"] = stats.x2.se;
  r["mean_p2"] = stats.p2.mean;
  r["se_p2"] = stats.p2.se;
  r["mean_energy"] = stats.energy.mean;
  r["se_energy"] = stats.energy.se;
  nlohmann::json coh_re = nlohmann::json::array();
  nlohmann::json coh_im = nlohmann::json::array();
  for (const auto& z : stats.coherence_mean) {
    coh_re.push_back(z.real());
    coh_im.push_back(z.imag());
  }
  r["coherence_re"] = std::move(coh_re);
  r["coherence_im"] = std::move(coh_im);
  r["se_coherence"] = stats.coherence_se;
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : stats.failures) {
    failures.push_back({{"trajectory", f.trajectory_index},
                        {"step", f.step_index},
                        {"message", f.message}});
  }
  r["failures"] = std::move(failures);
  out << doc.dump(2) << "\n";
}

void write_region_csv(std::ostream& out, const CombinedExclusion& combined,
                      const std::string& config_json,
                      const std::string& hash) {
  out << "# collapsim exclusion v1\n";
  out << "# config_hash=" << hash << "\n";
  out << "# config=" << config_json << "\n";
  out << "r_c,lambda_star,source\n";
  for (std::size_t i = 0; i < combined.r_c.size(); ++i) {
    const int b = combined.binding[i];
    out << format_double(combined.r_c[i]) << ','
        << format_double(combined.lambda_star[i]) << ','
        << (b >= 0 ? combined.sources[b] : "") << "\n";
  }
}

VerifyResult verify_output_text(const std::string& text) {
  VerifyResult res;
  std::string config;
  // CSV outputs start with provenance comments; anything else is JSON.
  if (text.rfind("# ", 0) == 0) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("# config_hash=", 0) == 0)
        res.embedded = line.substr(14);
      else if (line.rfind("# config=", 0) == 0)
        config = line.substr(9);
      if (!line.empty() && line[0] != '#') break;
    }
    if (res.embedded.empty() || config.empty()) {
      res.detail = "no embedded config/hash comments found";
      return res;
    }
  } else {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      res.detail = std::string("not a CSV with provenance or JSON: ") +
                   e.what();
      return res;
    }
    if (!doc.contains("config") || !doc.contains("config_hash")) {
      res.detail = "JSON lacks config/config_hash fields";
      return res;
    }
    config = doc["config"].dump();
    res.embedded = doc["config_hash"].get<std::string>();
  }
  res.recomputed = config_hash(config);
  res.ok = res.recomputed == res.embedded;
  if (!res.ok && res.detail.empty()) res.detail = "hash mismatch";
  return res;
}

VerifyResult verify_output_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    VerifyResult res;
    res.detail = "cannot open file";
    return res;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return verify_output_text(buf.str());
}

}  // namespace collapse
