// Black-box tests of the command-line tool: exit codes, output files,
// byte-level reproducibility and the embedded-config verification loop.
// Each invocation runs the real binary through the shell.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "collapse/constants.hpp"
#include "collapse/exclusion.hpp"
#include "collapse/kernels.hpp"
#include "collapse/params.hpp"
#include "collapse/predictions.hpp"
#include "collapse/records_io.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& scratch_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / "collapsim_cli_tests";
    std::error_code ec;
    fs::remove_all(p, ec);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = scratch_root() / name;
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = scratch_root() / ("stdout_" + std::to_string(counter));
  const fs::path err = scratch_root() / ("stderr_" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string(COLLAPSIM_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const std::string kRecords = std::string(DATA_DIR) + "/example_bounds.json";

}  // namespace

TEST_CASE("version flag") {
  const RunResult r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "collapsim"));
}

TEST_CASE("closed-form predictions print exact, verifiable documents") {
  const RunResult heat = run_cli(
      "predict heating --preset GRW --mass-kg 1.67262192369e-27");
  REQUIRE(heat.code == 0);
  const json hdoc = json::parse(heat.out);
  const double power = hdoc["results"]["power_w"].get<double>();
  const double rate = hdoc["results"]["rate_1d_w"].get<double>();
  CHECK(power == doctest::Approx(4.986729374369959e-44).epsilon(1e-12));
  CHECK(3.0 * rate == doctest::Approx(power).epsilon(1e-12));
  CHECK(hdoc["config_hash"].get<std::string>().size() == 16);

  const fs::path dir = fresh_dir("predict");
  const fs::path out_file = dir / "contrast.json";
  const RunResult con = run_cli(
      "predict contrast --preset GRW --mass-kg 1.67262192369e-22 "
      "--time-s 0.01 --separation 1e-6 --out " + out_file.string());
  REQUIRE(con.code == 0);
  const json cdoc = json::parse(con.out);
  CHECK(cdoc["results"]["contrast"].get<double>() ==
        doctest::Approx(0.9999999917724539).epsilon(1e-13));
  CHECK(slurp(out_file) == con.out);  // --out mirrors stdout byte for byte

  // The written document passes hash verification.
  const RunResult v = run_cli("verify " + out_file.string());
  CHECK(v.code == 0);
  CHECK(contains(v.out, "ok "));

  // Gravitational-kernel heating agrees with the library closed form.
  const RunResult dp = run_cli("predict heating --dp-r0 1e-15 --mass-amu 1000");
  REQUIRE(dp.code == 0);
  const json dpdoc = json::parse(dp.out);
  const double want = collapse::dp_heating_power(collapse::DpParams{1e-15},
                                                 1000.0 * collapse::kAmuKg);
  CHECK(dpdoc["results"]["power_w"].get<double>() ==
        doctest::Approx(want).epsilon(1e-12));

  // Contrast is a csl-model prediction; the dp model is rejected.
  const RunResult bad = run_cli(
      "predict contrast --dp-r0 1e-15 --mass-amu 1 --time-s 1 "
      "--separation 1e-7");
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "config error"));
}

TEST_CASE("simulate output is reproducible byte for byte") {
  const std::string base =
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 50 "
      "--trajectories 8 --tag run";
  const fs::path da = fresh_dir("sim_a");
  const fs::path db = fresh_dir("sim_b");
  const fs::path dc = fresh_dir("sim_c");
  const fs::path dd = fresh_dir("sim_d");
  const fs::path de = fresh_dir("sim_e");

  const RunResult a =
      run_cli(base + " --seed 777 --out-dir " + da.string());
  REQUIRE(a.code == 0);
  CHECK(contains(a.out, "config_hash "));
  CHECK(contains(a.out, "trajectories 8/8 ok"));
  CHECK(contains(a.out, "norm drift mean"));
  CHECK(contains(a.out, "wrote "));
  const std::string csv_a = slurp(da / "run.csv");
  const std::string json_a = slurp(da / "run.json");
  REQUIRE(!csv_a.empty());
  REQUIRE(!json_a.empty());

  // Same seed, more worker threads: identical bytes.
  const RunResult b = run_cli(base + " --seed 777 --threads 3 --out-dir " +
                              db.string());
  REQUIRE(b.code == 0);
  CHECK(slurp(db / "run.csv") == csv_a);
  CHECK(slurp(db / "run.json") == json_a);

  // Same run described by a config file instead of flags.
  const fs::path cfg_path = scratch_root() / "sim.json";
  spit(cfg_path, R"({"schema_version": 1, "preset": "GRW", "mass_amu": 1.0,
    "time_s": 1.0, "steps": 50, "trajectories": 8, "seed": 777,
    "tag": "run"})");
  const RunResult c = run_cli("simulate --config " + cfg_path.string() +
                              " --out-dir " + dc.string());
  REQUIRE(c.code == 0);
  CHECK(slurp(dc / "run.csv") == csv_a);
  CHECK(slurp(dc / "run.json") == json_a);

  // A different seed is a different ensemble.
  const RunResult d =
      run_cli(base + " --seed 888 --out-dir " + dd.string());
  REQUIRE(d.code == 0);
  const std::string csv_d = slurp(dd / "run.csv");
  CHECK(csv_d != csv_a);

  // Command-line flags win over config-file values.
  const RunResult e = run_cli("simulate --config " + cfg_path.string() +
                              " --seed 888 --out-dir " + de.string());
  REQUIRE(e.code == 0);
  CHECK(slurp(de / "run.csv") == csv_d);
}

TEST_CASE("simulate rejects inconsistent input with exit code 2") {
  const char* cases[] = {
      "simulate --preset NOPE --mass-amu 1 --time-s 1 --steps 5",
      "simulate --preset GRW --mass-kg 1e-27 --mass-amu 1 --time-s 1 "
      "--steps 5",
      "simulate --lambda 1e-16 --mass-amu 1 --time-s 1 --steps 5",
      "simulate --preset GRW --lambda 1e-16 --rc 1e-7 --mass-amu 1 "
      "--time-s 1 --steps 5",
      "simulate --preset GRW --mass-amu 1 --steps 5",
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 5 "
      "--initial blob",
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 5 --grid-n 48",
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 0",
  };
  for (const char* args : cases) {
    CAPTURE(args);
    const RunResult r = run_cli(args);
    CHECK(r.code == 2);
    CHECK(contains(r.err, "config error"));
  }

  // Kinetic stability guard: one second on a nanometre-scale grid.
  const RunResult unstable = run_cli(
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 10 --free");
  CHECK(unstable.code == 2);
  CHECK(contains(unstable.err, "stability"));

  // Config-file schema problems.
  const fs::path bad1 = scratch_root() / "bad1.json";
  spit(bad1, R"({"schema_version": 1, "presett": "GRW"})");
  const RunResult r1 = run_cli("simulate --config " + bad1.string() +
                               " --mass-amu 1 --time-s 1 --steps 5");
  CHECK(r1.code == 2);
  CHECK(contains(r1.err, "unknown config key"));

  const fs::path bad2 = scratch_root() / "bad2.json";
  spit(bad2, R"({"schema_version": 2, "preset": "GRW"})");
  const RunResult r2 = run_cli("simulate --config " + bad2.string() +
                               " --mass-amu 1 --time-s 1 --steps 5");
  CHECK(r2.code == 2);
  CHECK(contains(r2.err, "schema_version"));

  const fs::path bad3 = scratch_root() / "bad3.json";
  spit(bad3, R"({"schema_version": 1, "preset": "GRW", "steps": "fifty"})");
  const RunResult r3 = run_cli("simulate --config " + bad3.string() +
                               " --mass-amu 1 --time-s 1");
  CHECK(r3.code == 2);
  CHECK(contains(r3.err, "wrong type"));
}

TEST_CASE("simulate reports numerical failure with exit code 3") {
  // Damping rate times dt far above one: every trajectory diverges.
  const RunResult blow = run_cli(
      "simulate --lambda 1e6 --rc 1e-7 --mass-kg 1.0 --time-s 1 --steps 10 "
      "--trajectories 4");
  CHECK(blow.code == 3);
  CHECK(contains(blow.err, "numerical failure"));

  // A box short enough to corrupt the sampled spectrum is refused.
  const RunResult psd = run_cli(
      "simulate --lambda 1 --rc 1e-7 --dx 2.5e-8 --mass-amu 1 --time-s 1 "
      "--steps 10 --trajectories 2");
  CHECK(psd.code == 3);
  CHECK(contains(psd.err, "longer grid"));
}

TEST_CASE("default grids simulate cleanly for both kernel families") {
  const fs::path dir = fresh_dir("smoke");

  const RunResult dp = run_cli(
      "simulate --preset DP-Diosi --mass-amu 1000 --time-s 1e-3 --steps 50 "
      "--trajectories 8 --tag dp --out-dir " + dir.string());
  CHECK(dp.code == 0);
  CHECK(dp.err.empty());  // no short-grid warning on the default box
  CHECK(contains(dp.out, "trajectories 8/8 ok"));
  CHECK(fs::exists(dir / "dp.csv"));
  CHECK(fs::exists(dir / "dp.json"));

  const RunResult pk = run_cli(
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 20 "
      "--trajectories 4 --initial packet --sigma-dx 3 --tag pk --out-dir " +
      dir.string());
  CHECK(pk.code == 0);
  CHECK(fs::exists(dir / "pk.csv"));

  // Kinetic term within its stability bound.
  const RunResult fr = run_cli(
      "simulate --preset GRW --mass-amu 1 --time-s 1e-8 --steps 10 "
      "--trajectories 4 --free --initial packet --tag fr --out-dir " +
      dir.string());
  CHECK(fr.code == 0);
}

TEST_CASE("verify accepts intact outputs and flags tampering") {
  const fs::path dir = fresh_dir("verify");
  const RunResult sim = run_cli(
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 20 "
      "--trajectories 4 --seed 4242 --tag v --out-dir " + dir.string());
  REQUIRE(sim.code == 0);

  for (const char* name : {"v.csv", "v.json"}) {
    const RunResult ok = run_cli("verify " + (dir / name).string());
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "ok "));
  }

  // Flip one digit inside the embedded configuration.
  std::string text = slurp(dir / "v.csv");
  const std::string::size_type pos = text.find("\"steps\":20");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 10, "\"steps\":21");
  const fs::path tampered = dir / "tampered.csv";
  spit(tampered, text);
  const RunResult bad = run_cli("verify " + tampered.string());
  CHECK(bad.code == 3);
  CHECK(contains(bad.err, "verification failed"));

  const fs::path garbage = dir / "garbage.txt";
  spit(garbage, "not an output file\n");
  CHECK(run_cli("verify " + garbage.string()).code == 2);
  CHECK(run_cli("verify " + (dir / "missing.csv").string()).code == 2);
}

TEST_CASE("exclusion pipeline end to end") {
  const fs::path d1 = fresh_dir("exc_1");
  const fs::path d2 = fresh_dir("exc_2");
  const std::string base = "exclude --records " + kRecords + " --tag exc";

  const RunResult r1 = run_cli(base + " --out-dir " + d1.string());
  REQUIRE(r1.code == 0);
  CHECK(contains(r1.out, "preset GRW: allowed"));
  CHECK(contains(r1.out, "preset Adler-A: excluded"));
  CHECK(contains(r1.out, "entire r0 range excluded"));
  CHECK(contains(r1.out, "no r0 excluded"));

  const std::string csv = slurp(d1 / "exc.csv");
  const std::string svg = slurp(d1 / "exc.svg");
  const std::string js = slurp(d1 / "exc.json");
  REQUIRE(!csv.empty());
  REQUIRE(!svg.empty());
  REQUIRE(!js.empty());

  const RunResult r2 = run_cli(base + " --out-dir " + d2.string());
  REQUIRE(r2.code == 0);
  CHECK(slurp(d2 / "exc.csv") == csv);
  CHECK(slurp(d2 / "exc.svg") == svg);
  CHECK(slurp(d2 / "exc.json") == js);

  CHECK(run_cli("verify " + (d1 / "exc.csv").string()).code == 0);
  CHECK(run_cli("verify " + (d1 / "exc.json").string()).code == 0);

  // The summary agrees with an in-process run of the same pipeline.
  const json doc = json::parse(js);
  const auto records = collapse::load_experiment_records(kRecords);
  const auto grid = collapse::log_grid(1e-9, 1e-3, 200);
  std::vector<collapse::ExclusionRegion> regions;
  for (const auto& rec : records)
    regions.push_back(rec.kind == collapse::RecordKind::kHeatingBound
                          ? collapse::exclusion_from_heating(rec, grid)
                          : collapse::exclusion_from_contrast(rec, grid));
  const auto combined = collapse::combine_regions(regions);
  const auto grw =
      collapse::is_excluded(collapse::CslParams{1e-16, 1e-7}, combined);

  bool saw_grw = false;
  for (const auto& p : doc["results"]["presets"]) {
    if (p["name"].get<std::string>() != "GRW") continue;
    saw_grw = true;
    CHECK(p["excluded"].get<bool>() == grw.excluded);
    CHECK(p["lambda_star"].get<double>() ==
          doctest::Approx(grw.lambda_star).epsilon(1e-12));
  }
  CHECK(saw_grw);
  CHECK_FALSE(grw.excluded);

  REQUIRE(doc["results"]["dp_heating"].size() == 2);
  CHECK(doc["results"]["dp_heating"][0]["entire_range"].get<bool>());
  CHECK_FALSE(doc["results"]["dp_heating"][1]["any_excluded"].get<bool>());

  // Records problems are configuration errors.
  CHECK(run_cli("exclude --records /nonexistent/records.json").code == 2);
  const fs::path bad = scratch_root() / "bad_records.json";
  spit(bad, R"([{"kind": "heating_bound", "label": "x", "mass_kg": 1.0}])");
  const RunResult rb = run_cli("exclude --records " + bad.string());
  CHECK(rb.code == 2);
  CHECK(contains(rb.err, "config error"));
}

TEST_CASE("outputs land in COLLAPSIM_OUT_DIR when no flag is given") {
  const fs::path dir = fresh_dir("env_out");
  REQUIRE(setenv("COLLAPSIM_OUT_DIR", dir.string().c_str(), 1) == 0);
  const RunResult r = run_cli(
      "simulate --preset GRW --mass-amu 1 --time-s 1 --steps 10 "
      "--trajectories 4 --tag env");
  unsetenv("COLLAPSIM_OUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "env.csv"));
  CHECK(fs::exists(dir / "env.json"));
}
