#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xxz/cli/app.hpp"
#include "xxz/cli/config.hpp"
#include "xxz/cli/runner.hpp"
#include "xxz/cli/sweep.hpp"
#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace xxz;
using namespace xxz::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("xxz_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_json(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

json small_evolve() {
  return {{"protocol", "evolve"},
          {"ensemble", {{"atoms", 1e4}, {"sites", 6}, {"spin_noise", 0.05}}},
          {"couplings", {{"jz_hz", 0.02}, {"hx_hz", 5.0}}},
          {"sample_dt", 1e-4},
          {"seed", 7},
          {"options", {{"duration", 5e-4}}}};
}

}  // namespace

TEST_CASE("defaults and unit conversion") {
  const RunConfig c = parse_config(json{{"protocol", "evolve"}});
  CHECK(c.protocol == Protocol::Evolve);
  CHECK(c.seed == 0);
  CHECK(c.ensemble.sites == 25);

  const RunConfig h = parse_config(json{{"protocol", "evolve"}, {"couplings", {{"jz_hz", 0.5}, {"hx_hz", 10}}}});
  CHECK(h.couplings.j_z == doctest::Approx(2 * std::numbers::pi * 0.5));
  CHECK(h.couplings.h_x == doctest::Approx(2 * std::numbers::pi * 10));
}

TEST_CASE("schema violations are config errors") {
  CHECK_THROWS_AS(parse_config(json{{"protocol", "evolve"}, {"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"protocol", "evolve"}, {"couplings", {{"jzz_hz", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"protocol", "nope"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"protocol", "evolve"}, {"ensemble", {{"sites", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"protocol", "evolve"}, {"ensemble", {{"sites", 2.5}}}}), ConfigError);
  CHECK(parse_config(json{{"protocol", "evolve"}, {"ensemble", {{"sites", 12.0}}}}).ensemble.sites == 12);
  CHECK_THROWS_AS(parse_config(json{{"protocol", "tomography"}, {"options", {{"duration", 1e-3}}}}), ConfigError);
}

TEST_CASE("resolved config round-trips") {
  json j = small_evolve();
  const RunConfig a = parse_config(j);
  const json resolved = to_json(a);
  CHECK(to_json(parse_config(resolved)) == resolved);
  CHECK(resolved["couplings"]["jz_hz"].get<double>() == doctest::Approx(0.02));

  json d = {{"protocol", "dephase"}};
  const json rd = to_json(parse_config(d));
  CHECK(rd["options"]["hx_pre_hz"].is_null());
  CHECK(to_json(parse_config(rd)) == rd);
}

TEST_CASE("set_path") {
  json j = {{"couplings", {{"jz_hz", 1.0}}}, {"protocol", "evolve"}};
  set_path(j, "couplings.jz_hz", 3.0);
  CHECK(j["couplings"]["jz_hz"].get<double>() == 3.0);
  set_path(j, "options.duration", 2e-3);
  CHECK(j["options"]["duration"].get<double>() == 2e-3);
  CHECK_THROWS_AS(set_path(j, "protocol.x", 1.0), ConfigError);
}

TEST_CASE("worker count honours XXZ_SIM_THREADS") {
  ::setenv("XXZ_SIM_THREADS", "2", 1);
  CHECK(worker_count(10) == std::min<std::size_t>(2, std::max(1u, std::thread::hardware_concurrency())));
  CHECK(worker_count(1) == 1);
  ::unsetenv("XXZ_SIM_THREADS");
  CHECK(worker_count(3) >= 1);
  CHECK(worker_count(3) <= 3);
}

TEST_CASE("spectrum subcommand") {
  // N=2 XY at J_xy = -1 Hz: ground -6 Hz, gap 4 Hz.
  const Run r = invoke({"spectrum", "--n", "2", "--jxy", "-1"});
  CHECK(r.code == kExitOk);
  double gap = 0.0;
  for (const auto& l : lines(r.out))
    if (l.rfind("gap_hz ", 0) == 0) gap = std::stod(l.substr(7));
  CHECK(r.out.find("ground_energy_hz -5.99") != std::string::npos);
  CHECK(gap == doctest::Approx(4.0).epsilon(1e-9));

  CHECK(invoke({"spectrum", "--n", "9"}).code != kExitOk);
  const Run ising = invoke({"spectrum", "--n", "2", "--jxy", "-1", "--jz", "-1"});
  CHECK(ising.code == kExitOk);
  CHECK(ising.out.find("gap_hz n/a") != std::string::npos);
}

TEST_CASE("version and selftest") {
  const Run v = invoke({"--version"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find(version()) != std::string::npos);

  const Run s = invoke({"selftest"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("FAIL") == std::string::npos);
  CHECK(s.out.find("PASS") != std::string::npos);
}

TEST_CASE("config failures exit 2") {
  const fs::path dir = scratch("bad");
  CHECK(invoke({"evolve", "--config", (dir / "missing.json").string()}).code == kExitConfig);

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(invoke({"evolve", "--config", (dir / "broken.json").string()}).code == kExitConfig);

  const fs::path p = write_json(dir, json{{"protocol", "tomography"}});
  const Run mismatch = invoke({"evolve", "--config", p.string(), "--out", (dir / "o").string()});
  CHECK(mismatch.code == kExitConfig);
  CHECK_FALSE(mismatch.err.empty());
}

TEST_CASE("numerical failure exits 3") {
  const fs::path dir = scratch("num");
  // Far too short an XY window to see any oscillation.
  const json j = {{"protocol", "tomography"},
                  {"ensemble", {{"sites", 8}}},
                  {"physical", {{"theta_deg", 60}}},
                  {"options", {{"duration_xy", 1e-7}}}};
  const Run r = invoke({"tomography", "--config", write_json(dir, j).string(), "--out", (dir / "o").string()});
  CHECK(r.code == kExitNumerical);
}

TEST_CASE("evolve writes outputs and is reproducible") {
  const fs::path dir = scratch("evolve");
  const fs::path cfg = write_json(dir, small_evolve());
  REQUIRE(invoke({"evolve", "--config", cfg.string(), "--out", (dir / "a").string()}).code == kExitOk);
  REQUIRE(invoke({"evolve", "--config", cfg.string(), "--out", (dir / "b").string()}).code == kExitOk);
  for (const char* f : {"trajectory.csv", "initial_state.csv", "final_state.csv", "manifest.json"})
    CHECK(fs::exists(dir / "a" / f));
  CHECK(slurp(dir / "a" / "trajectory.csv") == slurp(dir / "b" / "trajectory.csv"));
  CHECK(slurp(dir / "a" / "final_state.csv") == slurp(dir / "b" / "final_state.csv"));

  const json m = json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(m["config"]["seed"].get<int>() == 7);
  CHECK(m["version"].get<std::string>() == version());

  // A different seed changes the noisy initial state.
  json other = small_evolve();
  other["seed"] = 8;
  const fs::path cfg2 = dir / "other.json";
  std::ofstream(cfg2) << other.dump();
  REQUIRE(invoke({"evolve", "--config", cfg2.string(), "--out", (dir / "c").string()}).code == kExitOk);
  CHECK(slurp(dir / "a" / "initial_state.csv") != slurp(dir / "c" / "initial_state.csv"));
}

TEST_CASE("sweep") {
  const fs::path dir = scratch("sweep");
  const json base = small_evolve();

  SUBCASE("empty list writes only the header") {
    const SweepReport r = run_sweep(base, "couplings.jz_hz", {}, dir / "empty");
    CHECK(r.points == 0);
    const auto rows = lines(slurp(dir / "empty" / "sweep.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rfind("index,couplings.jz_hz,status,message", 0) == 0);
  }

  SUBCASE("rows in input order, failures recorded, byte-identical reruns") {
    const std::vector<double> values = {0.03, -0.01, 0.0, 0.02};
    const SweepReport r = run_sweep(base, "couplings.jz_hz", values, dir / "a");
    CHECK(r.points == 4);
    CHECK(r.failed == 0);
    const auto rows = lines(slurp(dir / "a" / "sweep.csv"));
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::istringstream cells(rows[i + 1]);
      std::string idx, v, status;
      std::getline(cells, idx, ',');
      std::getline(cells, v, ',');
      std::getline(cells, status, ',');
      CHECK(std::stoul(idx) == i);
      CHECK(std::stod(v) == doctest::Approx(values[i]));
      CHECK(status == "ok");
    }
    run_sweep(base, "couplings.jz_hz", values, dir / "b");
    CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));

    // Negative site counts are rejected per point without stopping the sweep.
    const SweepReport f = run_sweep(base, "ensemble.sites", {4, -3, 5}, dir / "f");
    CHECK(f.points == 3);
    CHECK(f.failed == 1);
    const auto frows = lines(slurp(dir / "f" / "sweep.csv"));
    REQUIRE(frows.size() == 4);
    CHECK(frows[2].find("config_error") != std::string::npos);
    CHECK(frows[1].find(",ok,") != std::string::npos);
    CHECK(frows[3].find(",ok,") != std::string::npos);
  }

  SUBCASE("command line") {
    const fs::path cfg = write_json(dir, base);
    const Run r = invoke({"sweep", "--config", cfg.string(), "--param", "couplings.hx_hz", "--values", "1,2",
                       "--out", (dir / "cli").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("points 2") != std::string::npos);
    CHECK(r.out.find("failed 0") != std::string::npos);
    CHECK(invoke({"sweep", "--config", cfg.string(), "--param", "couplings.hx_hz", "--values", "1,x"}).code ==
          kExitConfig);
  }
}

TEST_CASE("shipped configs parse") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(XXZ_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path()));
    ++n;
  }
  CHECK(n >= 5);
}
