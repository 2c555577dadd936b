// Command-line front end: trajectory ensembles, closed-form predictions,
// exclusion maps and output verification.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
// Every CSV/JSON output embeds the resolved run configuration and its
// 64-bit FNV-1a hash; `collapsim verify FILE` rechecks the embedding.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "collapse/constants.hpp"
#include "collapse/io.hpp"
#include "collapse/kernels.hpp"
#include "collapse/master.hpp"
#include "collapse/noise.hpp"
#include "collapse/params.hpp"
#include "collapse/predictions.hpp"
#include "collapse/records_io.hpp"
#include "collapse/sde.hpp"
#include "collapse/svg.hpp"
#include "collapse/version.hpp"

namespace {

using collapse::InvalidParameter;
using nlohmann::json;

// ---------------------------------------------------------------------
// Config-file handling: a JSON object whose keys mirror the long option
// names (without --, with _ for -).  Command-line flags win over the file.

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidParameter("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object())
    throw InvalidParameter("config file must hold a JSON object");
  return doc;
}

void reject_unknown_keys(const json& cfg, const std::set<std::string>& known) {
  for (const auto& [key, value] : cfg.items()) {
    if (key == "schema_version") {
      if (!value.is_number_integer() || value.get<int>() != 1)
        throw InvalidParameter("config schema_version must be 1");
      continue;
    }
    if (!known.count(key))
      throw InvalidParameter("unknown config key '" + key + "'");
  }
}

template <typename T>
void fill_from_config(const json& cfg, const char* key,
                      std::optional<T>& slot) {
  if (slot.has_value()) return;  // flag took precedence
  const auto it = cfg.find(key);
  if (it == cfg.end()) return;
  try {
    slot = it->get<T>();
  } catch (const json::exception&) {
    throw InvalidParameter(std::string("config key '") + key +
                           "' has the wrong type");
  }
}

// ---------------------------------------------------------------------
// Shared option bundles.

struct ModelOpts {
  std::optional<std::string> preset;
  std::optional<double> lambda;
  std::optional<double> r_c;
  std::optional<double> dp_r0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--preset", preset,
                    "named parameter set (GRW, Adler-A, Adler-B, DP-Diosi)");
    cmd->add_option("--lambda", lambda, "collapse rate [1/s]");
    cmd->add_option("--rc", r_c, "correlation length [m]");
    cmd->add_option("--dp-r0", dp_r0, "gravitational cutoff length [m]");
  }

  void fill(const json& cfg) {
    fill_from_config(cfg, "preset", preset);
    fill_from_config(cfg, "lambda", lambda);
    fill_from_config(cfg, "rc", r_c);
    fill_from_config(cfg, "dp_r0", dp_r0);
  }

  collapse::ModelParams resolve() const {
    const bool explicit_csl = lambda.has_value() || r_c.has_value();
    const int ways = (preset.has_value() ? 1 : 0) + (explicit_csl ? 1 : 0) +
                     (dp_r0.has_value() ? 1 : 0);
    if (ways != 1)
      throw InvalidParameter(
          "specify exactly one of --preset, --lambda/--rc, --dp-r0");
    if (preset) return collapse::preset(*preset).params;
    if (dp_r0) {
      collapse::DpParams p{*dp_r0};
      p.validate();
      return p;
    }
    if (!lambda || !r_c)
      throw InvalidParameter("--lambda and --rc must be given together");
    collapse::CslParams p{*lambda, *r_c};
    p.validate();
    return p;
  }
};

struct MassOpts {
  std::optional<double> kg;
  std::optional<double> amu;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--mass-kg", kg, "particle mass [kg]");
    cmd->add_option("--mass-amu", amu, "particle mass [amu]");
  }

  void fill(const json& cfg) {
    fill_from_config(cfg, "mass_kg", kg);
    fill_from_config(cfg, "mass_amu", amu);
  }

  double resolve() const {
    if (kg.has_value() == amu.has_value())
      throw InvalidParameter("specify exactly one of --mass-kg, --mass-amu");
    const double m = kg ? *kg : *amu * collapse::kAmuKg;
    if (!(m > 0.0)) throw InvalidParameter("mass must be > 0");
    return m;
  }
};

json model_json(const collapse::ModelParams& model) {
  json j;
  if (const auto* csl = std::get_if<collapse::CslParams>(&model)) {
    j["type"] = "csl";
    j["lambda"] = csl->lambda;
    j["r_c"] = csl->r_c;
  } else {
    const auto& dp = std::get<collapse::DpParams>(model);
    j["type"] = "dp";
    j["r0"] = dp.r0;
  }
  return j;
}

std::string out_directory(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("COLLAPSIM_OUT_DIR"); env && *env)
    return env;
  return ".";
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write '" + path.string() + "'");
  out << bytes;
}

// ---------------------------------------------------------------------
// simulate

struct SimulateOpts {
  ModelOpts model;
  MassOpts mass;
  std::optional<int> grid_n;
  std::optional<double> dx;
  std::optional<double> time_s;
  std::optional<long> steps;
  std::optional<long> trajectories;
  std::optional<std::uint64_t> seed;
  std::optional<long> stride;
  std::optional<bool> free_particle;
  std::optional<std::string> initial;
  std::optional<double> sigma_dx;
  std::optional<long> separation_dx;
  std::optional<double> k0;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> tag;
};

int run_simulate(const SimulateOpts& o) {
  const collapse::ModelParams model = o.model.resolve();
  const double mass = o.mass.resolve();

  collapse::GridSpec grid;
  grid.n_points = o.grid_n.value_or(64);
  const collapse::NoiseKernel kernel = collapse::kernel_for(model);
  if (o.dx) {
    grid.dx = *o.dx;
  } else if (const auto* dp = std::get_if<collapse::DpParams>(&model)) {
    // Coarse by default: at laboratory scales the 1/u tail is what matters,
    // and a row sampled this coarsely is convex, hence positive semidefinite.
    // Boxes that resolve r0 itself put the regularized cap on the grid and
    // fail the spectral check.
    grid.dx = 4.0 * dp->r0;
  } else if (kernel.correlation_length) {
    // Half a correlation length resolves the Gaussian while the default
    // 64-point box spans 32 lengths; shorter boxes leave periodic-truncation
    // artifacts in the sampled spectrum.
    grid.dx = *kernel.correlation_length / 2.0;
  } else {
    throw InvalidParameter("--dx required for kernels without a length");
  }
  grid.validate();

  if (!o.time_s || !o.steps)
    throw InvalidParameter("--time-s and --steps are required");
  if (*o.steps < 1) throw InvalidParameter("--steps must be >= 1");

  collapse::TrajectoryConfig tc;
  tc.dt = *o.time_s / static_cast<double>(*o.steps);
  tc.n_steps = *o.steps;
  tc.master_seed = o.seed.value_or(12345);
  tc.n_trajectories = static_cast<int>(o.trajectories.value_or(1000));
  tc.sample_stride = o.stride.value_or(0) > 0
                         ? *o.stride
                         : std::max<long>(1, *o.steps / 100);
  tc.n_threads = o.threads.value_or(0);

  const bool free_particle = o.free_particle.value_or(false);
  const collapse::Hamiltonian h =
      free_particle ? collapse::Hamiltonian::free_particle(grid, mass)
                    : collapse::Hamiltonian::zero(grid);

  const std::string initial = o.initial.value_or("superposition");
  const long sep_sites = o.separation_dx.value_or(grid.n_points / 4);
  const int mid = grid.n_points / 2;
  collapse::WaveState psi0;
  if (initial == "superposition") {
    const int a = mid - static_cast<int>(sep_sites / 2);
    const int b = a + static_cast<int>(sep_sites);
    psi0 = collapse::two_point_superposition(grid, a, b);
    tc.coherence_pair = {a, b};
  } else if (initial == "packet") {
    const double sigma = o.sigma_dx.value_or(4.0) * grid.dx;
    psi0 = collapse::gaussian_packet(grid, 0.0, sigma, o.k0.value_or(0.0));
    tc.coherence_pair = {mid, mid + static_cast<int>(sep_sites)};
  } else {
    throw InvalidParameter("--initial must be 'superposition' or 'packet'");
  }
  tc.validate(h);

  const collapse::MassDensityOperator mop =
      collapse::MassDensityOperator::point_particle(grid, mass);
  const collapse::KernelContext ctx(kernel, grid);

  json cfg;
  cfg["schema_version"] = 1;
  cfg["command"] = "simulate";
  cfg["code_version"] = collapse::kVersion;
  cfg["model"] = model_json(model);
  cfg["mass_kg"] = mass;
  cfg["grid_n"] = grid.n_points;
  cfg["dx"] = grid.dx;
  cfg["time_s"] = *o.time_s;
  cfg["steps"] = tc.n_steps;
  cfg["dt"] = tc.dt;
  cfg["trajectories"] = tc.n_trajectories;
  cfg["seed"] = tc.master_seed;
  cfg["stride"] = tc.sample_stride;
  cfg["free"] = free_particle;
  cfg["initial"] = initial;
  cfg["sigma_dx"] = o.sigma_dx.value_or(4.0);
  cfg["separation_dx"] = sep_sites;
  cfg["k0"] = o.k0.value_or(0.0);
  const std::string cfg_str = cfg.dump();
  const std::string hash = collapse::config_hash(cfg_str);

  const collapse::EnsembleStats stats =
      collapse::run_ensemble(psi0, h, mop, ctx, tc);
  if (stats.n_succeeded == 0 && stats.n_requested > 0) {
    const auto& f = stats.failures.front();
    throw collapse::NumericalBlowup(
        "all " + std::to_string(stats.n_requested) +
            " trajectories diverged (first: trajectory " +
            std::to_string(f.trajectory_index) + ", " + f.message + ")",
        f.step_index);
  }

  const std::filesystem::path dir = out_directory(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::string tag = o.tag.value_or("run");

  std::ostringstream csv;
  collapse::write_ensemble_csv(csv, stats, cfg_str, hash);
  write_file(dir / (tag + ".csv"), csv.str());
  std::ostringstream js;
  collapse::write_ensemble_json(js, stats, cfg_str, hash);
  write_file(dir / (tag + ".json"), js.str());

  const auto abs_coh = [](const std::complex<double>& z) {
    return std::abs(z);
  };
  std::cout << "config_hash " << hash << "\n";
  std::cout << "trajectories " << stats.n_succeeded << "/"
            << stats.n_requested << " ok\n";
  std::cout << "norm drift mean " << collapse::format_double(
                   stats.mean_abs_norm_drift)
            << " max " << collapse::format_double(stats.max_abs_norm_drift)
            << "\n";
  std::cout << "|coherence| initial "
            << collapse::format_double(abs_coh(stats.coherence_mean.front()))
            << " final "
            << collapse::format_double(abs_coh(stats.coherence_mean.back()))
            << "\n";
  std::cout << "mean energy final "
            << collapse::format_double(stats.energy.mean.back()) << " J\n";
  std::cout << "wrote " << (dir / (tag + ".csv")).string() << ", "
            << (dir / (tag + ".json")).string() << "\n";
  if (!stats.failures.empty()) {
    std::cout << stats.failures.size() << " trajectories failed";
    std::cout << " (first: trajectory " << stats.failures.front().trajectory_index
              << " step " << stats.failures.front().step_index << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------------
// predict

struct PredictOpts {
  ModelOpts model;
  MassOpts mass;
  std::optional<double> time_s;
  std::optional<double> separation;
  std::optional<std::string> out_path;
};

int run_predict_contrast(const PredictOpts& o) {
  const collapse::ModelParams model = o.model.resolve();
  const auto* csl = std::get_if<collapse::CslParams>(&model);
  if (!csl)
    throw InvalidParameter(
        "contrast predictions are defined for the csl model only");
  const double mass = o.mass.resolve();
  if (!o.time_s || !o.separation)
    throw InvalidParameter("--time-s and --separation are required");
  collapse::InterferometricSetup setup{mass, *o.time_s, *o.separation};
  const double contrast = collapse::contrast_reduction(*csl, setup);

  json cfg;
  cfg["schema_version"] = 1;
  cfg["command"] = "predict contrast";
  cfg["code_version"] = collapse::kVersion;
  cfg["model"] = model_json(model);
  cfg["mass_kg"] = mass;
  cfg["flight_time_s"] = setup.flight_time;
  cfg["separation_m"] = setup.separation;
  const std::string cfg_str = cfg.dump();

  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "contrast_prediction";
  doc["config"] = cfg;
  doc["config_hash"] = collapse::config_hash(cfg_str);
  doc["results"]["contrast"] = contrast;
  doc["results"]["reduction"] = 1.0 - contrast;
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (o.out_path) write_file(*o.out_path, text);
  return 0;
}

int run_predict_heating(const PredictOpts& o) {
  const collapse::ModelParams model = o.model.resolve();
  const double mass = o.mass.resolve();
  double power = 0.0;
  double rate_1d = 0.0;
  if (const auto* csl = std::get_if<collapse::CslParams>(&model)) {
    power = collapse::heating_power(*csl, mass);
    rate_1d = collapse::heating_rate_1d(collapse::csl_kernel(*csl), mass);
  } else {
    const auto& dp = std::get<collapse::DpParams>(model);
    power = collapse::dp_heating_power(dp, mass);
    rate_1d = collapse::heating_rate_1d(collapse::dp_kernel(dp), mass);
  }

  json cfg;
  cfg["schema_version"] = 1;
  cfg["command"] = "predict heating";
  cfg["code_version"] = collapse::kVersion;
  cfg["model"] = model_json(model);
  cfg["mass_kg"] = mass;
  const std::string cfg_str = cfg.dump();

  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "heating_prediction";
  doc["config"] = cfg;
  doc["config_hash"] = collapse::config_hash(cfg_str);
  doc["results"]["power_w"] = power;
  doc["results"]["rate_1d_w"] = rate_1d;
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (o.out_path) write_file(*o.out_path, text);
  return 0;
}

// ---------------------------------------------------------------------
// exclude

struct ExcludeOpts {
  std::optional<std::string> records_path;
  std::optional<double> rc_min;
  std::optional<double> rc_max;
  std::optional<int> rc_points;
  std::optional<double> r0_min;
  std::optional<double> r0_max;
  std::optional<std::string> out_dir;
  std::optional<std::string> tag;
};

int run_exclude(const ExcludeOpts& o) {
  if (!o.records_path) throw InvalidParameter("--records is required");
  const auto records = collapse::load_experiment_records(*o.records_path);
  if (records.empty())
    throw InvalidParameter("records file contains no records");

  const auto rc_grid = collapse::log_grid(
      o.rc_min.value_or(1e-9), o.rc_max.value_or(1e-3),
      o.rc_points.value_or(200));
  const double r0_lo = o.r0_min.value_or(1e-16);
  const double r0_hi = o.r0_max.value_or(1e-12);

  std::vector<collapse::ExclusionRegion> regions;
  for (const auto& rec : records) {
    if (rec.kind == collapse::RecordKind::kHeatingBound)
      regions.push_back(collapse::exclusion_from_heating(rec, rc_grid));
    else
      regions.push_back(collapse::exclusion_from_contrast(rec, rc_grid));
  }
  const collapse::CombinedExclusion combined =
      collapse::combine_regions(regions);

  json cfg;
  cfg["schema_version"] = 1;
  cfg["command"] = "exclude";
  cfg["code_version"] = collapse::kVersion;
  cfg["records"] = json::array();
  for (const auto& rec : records) {
    json r;
    r["label"] = rec.label;
    r["kind"] = rec.kind == collapse::RecordKind::kHeatingBound
                    ? "heating_bound"
                    : "interferometric_contrast";
    r["mass_kg"] = rec.mass;
    if (rec.kind == collapse::RecordKind::kHeatingBound) {
      r["power_ceiling_w"] = std::isinf(rec.power_ceiling)
                                 ? json("inf")
                                 : json(rec.power_ceiling);
    } else {
      r["flight_time_s"] = rec.flight_time;
      r["separation_m"] = rec.separation;
      r["contrast_floor"] = rec.contrast_floor;
    }
    cfg["records"].push_back(std::move(r));
  }
  cfg["rc_min"] = rc_grid.front();
  cfg["rc_max"] = rc_grid.back();
  cfg["rc_points"] = static_cast<int>(rc_grid.size());
  cfg["r0_min"] = r0_lo;
  cfg["r0_max"] = r0_hi;
  const std::string cfg_str = cfg.dump();
  const std::string hash = collapse::config_hash(cfg_str);

  const std::filesystem::path dir = out_directory(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::string tag = o.tag.value_or("exclusion");

  std::ostringstream csv;
  collapse::write_region_csv(csv, combined, cfg_str, hash);
  write_file(dir / (tag + ".csv"), csv.str());

  std::ostringstream svg;
  collapse::write_exclusion_svg(svg, combined, regions,
                                collapse::all_presets());
  write_file(dir / (tag + ".svg"), svg.str());

  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "exclusion_summary";
  doc["config"] = cfg;
  doc["config_hash"] = hash;
  json& res = doc["results"];
  res["presets"] = json::array();
  for (const auto& p : collapse::all_presets()) {
    const auto* csl = std::get_if<collapse::CslParams>(&p.params);
    if (!csl) continue;
    json v;
    v["name"] = p.name;
    try {
      const auto verdict = collapse::is_excluded(*csl, combined);
      v["excluded"] = verdict.excluded;
      v["lambda_star"] = std::isinf(verdict.lambda_star)
                             ? json("inf")
                             : json(verdict.lambda_star);
      if (verdict.excluded) v["binding_source"] = verdict.binding_source;
    } catch (const collapse::OutOfGridRange&) {
      v["excluded"] = nullptr;
      v["note"] = "r_c outside tabulated grid";
    }
    res["presets"].push_back(std::move(v));
  }
  res["dp_heating"] = json::array();
  for (const auto& rec : records) {
    if (rec.kind != collapse::RecordKind::kHeatingBound) continue;
    const auto dp = collapse::dp_exclusion_from_heating(rec, r0_lo, r0_hi);
    json v;
    v["source"] = dp.source;
    v["any_excluded"] = dp.any_excluded;
    v["entire_range"] = dp.entire_range;
    if (dp.any_excluded) v["r0_star"] = dp.r0_star;
    res["dp_heating"].push_back(std::move(v));
  }
  const std::string text = doc.dump(2) + "\n";
  write_file(dir / (tag + ".json"), text);

  std::cout << "config_hash " << hash << "\n";
  for (const auto& v : res["presets"]) {
    std::cout << "preset " << v["name"].get<std::string>() << ": ";
    if (v["excluded"].is_null())
      std::cout << "r_c outside grid\n";
    else if (v["excluded"].get<bool>())
      std::cout << "excluded (by "
                << v.value("binding_source", std::string("?")) << ")\n";
    else
      std::cout << "allowed\n";
  }
  for (const auto& v : res["dp_heating"]) {
    std::cout << "dp heating '" << v["source"].get<std::string>() << "': ";
    if (!v["any_excluded"].get<bool>())
      std::cout << "no r0 excluded\n";
    else if (v["entire_range"].get<bool>())
      std::cout << "entire r0 range excluded\n";
    else
      std::cout << "r0 < " << collapse::format_double(
                       v["r0_star"].get<double>())
                << " m excluded\n";
  }
  std::cout << "wrote " << (dir / (tag + ".csv")).string() << ", "
            << (dir / (tag + ".svg")).string() << ", "
            << (dir / (tag + ".json")).string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------

int dispatch(int argc, char** argv) {
  CLI::App app{"collapse-dynamics toolkit"};
  app.set_version_flag("--version", std::string("collapsim ") +
                                        collapse::kVersion);
  app.require_subcommand(1);

  std::string config_path;

  // simulate
  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "integrate a stochastic trajectory ensemble");
  simulate->add_option("--config", config_path, "JSON config file");
  sim.model.add_flags(simulate);
  sim.mass.add_flags(simulate);
  simulate->add_option("--grid-n", sim.grid_n, "grid points (power of two)");
  simulate->add_option("--dx", sim.dx, "grid spacing [m]");
  simulate->add_option("--time-s", sim.time_s, "total integration time [s]");
  simulate->add_option("--steps", sim.steps, "number of steps");
  simulate->add_option("--trajectories", sim.trajectories,
                       "ensemble size (default 1000)");
  simulate->add_option("--seed", sim.seed, "master seed (default 12345)");
  simulate->add_option("--stride", sim.stride,
                       "sample every k-th step (default: ~100 samples)");
  simulate->add_flag("--free", [&sim](std::int64_t) {
    sim.free_particle = true;
  }, "include the kinetic term");
  simulate->add_option("--initial", sim.initial,
                       "'superposition' (default) or 'packet'");
  simulate->add_option("--sigma-dx", sim.sigma_dx,
                       "packet width in grid spacings (default 4)");
  simulate->add_option("--separation-dx", sim.separation_dx,
                       "site separation in grid spacings (default n/4)");
  simulate->add_option("--k0", sim.k0, "packet wavenumber [1/m]");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  simulate->add_option("--out-dir", sim.out_dir,
                       "output directory (default $COLLAPSIM_OUT_DIR or .)");
  simulate->add_option("--tag", sim.tag, "output basename (default 'run')");

  // predict
  PredictOpts pred;
  CLI::App* predict = app.add_subcommand("predict", "closed-form predictions");
  predict->require_subcommand(1);
  CLI::App* contrast = predict->add_subcommand(
      "contrast", "interferometric fringe-contrast reduction");
  contrast->add_option("--config", config_path, "JSON config file");
  pred.model.add_flags(contrast);
  pred.mass.add_flags(contrast);
  contrast->add_option("--time-s", pred.time_s, "flight time [s]");
  contrast->add_option("--separation", pred.separation,
                       "superposition separation [m]");
  contrast->add_option("--out", pred.out_path, "also write the JSON here");
  CLI::App* heating = predict->add_subcommand(
      "heating", "steady heating power of a free particle");
  heating->add_option("--config", config_path, "JSON config file");
  PredictOpts pred_heat;
  pred_heat.model.add_flags(heating);
  pred_heat.mass.add_flags(heating);
  heating->add_option("--out", pred_heat.out_path, "also write the JSON here");

  // exclude
  ExcludeOpts exc;
  CLI::App* exclude = app.add_subcommand(
      "exclude", "map experimental bounds to excluded parameter regions");
  exclude->add_option("--config", config_path, "JSON config file");
  exclude->add_option("--records", exc.records_path,
                      "experiment records JSON file");
  exclude->add_option("--rc-min", exc.rc_min, "grid start [m] (1e-9)");
  exclude->add_option("--rc-max", exc.rc_max, "grid end [m] (1e-3)");
  exclude->add_option("--rc-points", exc.rc_points, "grid points (200)");
  exclude->add_option("--r0-min", exc.r0_min, "r0 search start [m] (1e-16)");
  exclude->add_option("--r0-max", exc.r0_max, "r0 search end [m] (1e-12)");
  exclude->add_option("--out-dir", exc.out_dir,
                      "output directory (default $COLLAPSIM_OUT_DIR or .)");
  exclude->add_option("--tag", exc.tag, "output basename ('exclusion')");

  // verify
  std::string verify_path;
  CLI::App* verify = app.add_subcommand(
      "verify", "recheck the config hash embedded in an output file");
  verify->add_option("file", verify_path, "CSV or JSON output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  json cfg = json::object();
  if (!config_path.empty()) cfg = load_config_file(config_path);

  if (simulate->parsed()) {
    reject_unknown_keys(
        cfg, {"preset", "lambda", "rc", "dp_r0", "mass_kg", "mass_amu",
              "grid_n", "dx", "time_s", "steps", "trajectories", "seed",
              "stride", "free", "initial", "sigma_dx", "separation_dx", "k0",
              "threads", "out_dir", "tag"});
    sim.model.fill(cfg);
    sim.mass.fill(cfg);
    fill_from_config(cfg, "grid_n", sim.grid_n);
    fill_from_config(cfg, "dx", sim.dx);
    fill_from_config(cfg, "time_s", sim.time_s);
    fill_from_config(cfg, "steps", sim.steps);
    fill_from_config(cfg, "trajectories", sim.trajectories);
    fill_from_config(cfg, "seed", sim.seed);
    fill_from_config(cfg, "stride", sim.stride);
    fill_from_config(cfg, "free", sim.free_particle);
    fill_from_config(cfg, "initial", sim.initial);
    fill_from_config(cfg, "sigma_dx", sim.sigma_dx);
    fill_from_config(cfg, "separation_dx", sim.separation_dx);
    fill_from_config(cfg, "k0", sim.k0);
    fill_from_config(cfg, "threads", sim.threads);
    fill_from_config(cfg, "out_dir", sim.out_dir);
    fill_from_config(cfg, "tag", sim.tag);
    return run_simulate(sim);
  }
  if (contrast->parsed()) {
    reject_unknown_keys(cfg, {"preset", "lambda", "rc", "dp_r0", "mass_kg",
                              "mass_amu", "time_s", "separation"});
    pred.model.fill(cfg);
    pred.mass.fill(cfg);
    fill_from_config(cfg, "time_s", pred.time_s);
    fill_from_config(cfg, "separation", pred.separation);
    return run_predict_contrast(pred);
  }
  if (heating->parsed()) {
    reject_unknown_keys(cfg, {"preset", "lambda", "rc", "dp_r0", "mass_kg",
                              "mass_amu"});
    pred_heat.model.fill(cfg);
    pred_heat.mass.fill(cfg);
    return run_predict_heating(pred_heat);
  }
  if (exclude->parsed()) {
    reject_unknown_keys(cfg, {"records", "rc_min", "rc_max", "rc_points",
                              "r0_min", "r0_max", "out_dir", "tag"});
    fill_from_config(cfg, "records", exc.records_path);
    fill_from_config(cfg, "rc_min", exc.rc_min);
    fill_from_config(cfg, "rc_max", exc.rc_max);
    fill_from_config(cfg, "rc_points", exc.rc_points);
    fill_from_config(cfg, "r0_min", exc.r0_min);
    fill_from_config(cfg, "r0_max", exc.r0_max);
    fill_from_config(cfg, "out_dir", exc.out_dir);
    fill_from_config(cfg, "tag", exc.tag);
    return run_exclude(exc);
  }
  if (verify->parsed()) {
    const collapse::VerifyResult res =
        collapse::verify_output_file(verify_path);
    if (res.ok) {
      std::cout << "ok " << res.recomputed << "\n";
      return 0;
    }
    if (res.embedded.empty()) {
      std::cerr << "config error: " << res.detail << "\n";
      return 2;
    }
    std::cerr << "verification failed: embedded " << res.embedded
              << " recomputed " << res.recomputed << "\n";
    return 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const collapse::NumericalBlowup& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const collapse::NotPositiveSemidefinite& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const collapse::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
