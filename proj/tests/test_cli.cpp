#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gripcheck/cli.hpp"

using namespace gripcheck;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gripcheck_test_" + std::to_string(std::uint64_t(::getpid())) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string small_config(int trials_per_class) {
  return "[campaign]\ntrials_per_class = " + std::to_string(trials_per_class) +
         "\nseed = 5\nsample_period_s = 0.05\n";
}

}  // namespace

TEST_CASE("cmd_simulate writes traces plus a manifest; missing config exits 2") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "c.toml";
  {
    std::ofstream out(cfg);
    out << small_config(2);
  }
  SimulateOptions opt;
  opt.config_path = cfg.string();
  opt.out_dir = (tmp.path / "run").string();
  std::ostringstream err;
  REQUIRE(cmd_simulate(opt, err) == 0);
  CHECK(fs::exists(tmp.path / "run" / "manifest.json"));
  int traces = 0;
  for (const auto& e : fs::directory_iterator(tmp.path / "run"))
    if (e.path().extension() == ".jsonl") ++traces;
  CHECK(traces == 8);

  SimulateOptions missing;
  missing.config_path = (tmp.path / "absent.toml").string();
  missing.out_dir = (tmp.path / "run2").string();
  std::ostringstream err2;
  CHECK(cmd_simulate(missing, err2) == 2);
  CHECK(err2.str().find("absent.toml") != std::string::npos);
}

TEST_CASE("fault flags are recorded in the manifest") {
  TempDir tmp;
  SimulateOptions opt;
  opt.out_dir = (tmp.path / "run").string();
  opt.seed = 9;
  opt.faults = {"degradation=0.001"};
  // no config file: defaults (100/class) would be slow, so use a config
  const fs::path cfg = tmp.path / "c.toml";
  {
    std::ofstream out(cfg);
    out << small_config(1);
  }
  opt.config_path = cfg.string();
  std::ostringstream err;
  REQUIRE(cmd_simulate(opt, err) == 0);
  std::ifstream in(tmp.path / "run" / "manifest.json");
  nlohmann::json manifest = nlohmann::json::parse(in);
  CHECK(manifest["faults"]["degradation_slope_per_h"] == 0.001);
  CHECK(manifest["seed"] == 9);
  CHECK(manifest["item_initial_velocity_pinned"] == true);
}

TEST_CASE("cmd_verify on a small campaign reports insufficient data (exit 3)") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "c.toml";
  {
    std::ofstream out(cfg);
    out << small_config(3);  // 12 trials < n_min
  }
  SimulateOptions sim;
  sim.config_path = cfg.string();
  sim.out_dir = (tmp.path / "run").string();
  std::ostringstream err;
  REQUIRE(cmd_simulate(sim, err) == 0);

  VerifyOptions ver;
  ver.traces_dir = sim.out_dir;
  std::ostringstream out, verr;
  const int code = cmd_verify(ver, out, verr);
  CHECK(code == 3);
  CHECK(fs::exists(fs::path(sim.out_dir) / "report.json"));
  CHECK(out.str().find("RQ1.4") != std::string::npos);

  std::ifstream rin(fs::path(sim.out_dir) / "report.json");
  nlohmann::json report = nlohmann::json::parse(rin);
  CHECK(report["summary"]["exit_code"] == 3);
  bool saw_review = false;
  for (const auto& r : report["requirements"])
    if (r["id"] == "RQ5.1") saw_review = r["verdict"]["status"] == "needs-human-review";
  CHECK(saw_review);
}

TEST_CASE("cmd_verify exits 2 on missing or malformed inputs") {
  TempDir tmp;
  VerifyOptions ver;
  ver.traces_dir = (tmp.path / "nowhere").string();
  std::ostringstream out, err;
  CHECK(cmd_verify(ver, out, err) == 2);

  fs::create_directories(tmp.path / "empty");
  VerifyOptions ver2;
  ver2.traces_dir = (tmp.path / "empty").string();
  CHECK(cmd_verify(ver2, out, err) == 2);

  fs::create_directories(tmp.path / "bad");
  {
    std::ofstream t(tmp.path / "bad" / "trial_0.jsonl");
    t << "{broken\n";
  }
  VerifyOptions ver3;
  ver3.traces_dir = (tmp.path / "bad").string();
  CHECK(cmd_verify(ver3, out, err) == 2);

  VerifyOptions ver4;
  ver4.spec_path = (tmp.path / "nope.gspec").string();
  ver4.traces_dir = (tmp.path / "bad").string();
  CHECK(cmd_verify(ver4, out, err) == 2);
}

TEST_CASE("cmd_catalog emits a reparseable catalog with the psi thresholds") {
  TempDir tmp;
  CatalogOptions opt;
  opt.out_path = (tmp.path / "catalog.gspec").string();
  std::ostringstream out, err;
  REQUIRE(cmd_catalog(opt, out, err) == 0);

  std::ifstream in(opt.out_path);
  std::ostringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("[3 psi, 4 psi]") != std::string::npos);

  ParseResult parsed = parse_spec(text.str());
  REQUIRE(parsed.ok());
  CHECK(*parsed.doc == builtin_catalog());
}
