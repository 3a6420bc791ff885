#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "raceway/config.hpp"
#include "raceway/scenario.hpp"
#include "raceway/writers.hpp"

using namespace raceway;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("raceway_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("values, comments, case-insensitive keys") {
    auto f = ConfigFile::parse_string(
        "[grid]\n"
        "Cells = 42   # comment\n"
        "length = 12.5\n"
        "; full-line comment\n"
        "[scheme]\n"
        "limiter = off\n",
        "t.ini");
    CHECK(f.get_int("grid", "cells", 0) == 42);
    CHECK(f.get_double("grid", "length", 0.0) == 12.5);
    CHECK(f.get_bool("scheme", "limiter", true) == false);
    CHECK(f.get_double("grid", "missing", 7.5) == 7.5);
  }
  SUBCASE("errors carry line numbers") {
    try {
      ConfigFile::parse_string("[grid]\ncells == 3\n", "bad.ini");
      auto f = ConfigFile::parse_string("[grid]\ncells = abc\n", "bad.ini");
      f.get_int("grid", "cells", 0);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bad.ini:2") != std::string::npos);
    }
  }
  SUBCASE("unknown keys are rejected with their line") {
    auto f = ConfigFile::parse_string("[grid]\ncells = 10\nbogus = 1\n", "u.ini");
    try {
      config_from_ini(f);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("u.ini:3") != std::string::npos);
      CHECK(msg.find("bogus") != std::string::npos);
    }
  }
  SUBCASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(ConfigFile::parse_string("[a]\nx = 1\nx = 2\n"), ConfigError);
  }
  SUBCASE("schema violations in values are rejected") {
    auto f = ConfigFile::parse_string("[bio]\nq0 = -0.1\n");
    CHECK_THROWS_AS(config_from_ini(f), ConfigError);
    auto f2 = ConfigFile::parse_string("[bio]\nq0 = 0.3\nq_l = 0.25\n");
    CHECK_THROWS_AS(config_from_ini(f2), ConfigError);
  }
  SUBCASE("defaults carry the published parameter table") {
    auto f = ConfigFile::parse_string("[run]\nduration = 1\n");
    RunConfig c = config_from_ini(f);
    CHECK(c.bio.mu_tilde == 1.7);
    CHECK(c.bio.K_sI == 70.0);
    CHECK(c.bio.K_iI == 295.0);
    CHECK(c.bio.lambda_bar == 0.073);
    CHECK(c.bio.K3 == 0.0012);
    CHECK(c.bio.R == 0.0081);
    CHECK(c.bio.I0_max == 500.0);
    CHECK(c.bio.gamma_star == 0.25);
    CHECK(c.bio.atten_a == 16.2);
    CHECK(c.bio.atten_b == 0.087);
  }
  SUBCASE("resolved dump round-trips through the parser") {
    auto f = ConfigFile::parse_string("[grid]\ncells = 33\n[wheel]\nenabled = true\n");
    RunConfig c = config_from_ini(f);
    RunConfig c2 = config_from_ini(ConfigFile::parse_string(to_ini(c)));
    CHECK(c2.cells == 33);
    CHECK(c2.wheel.enabled);
    CHECK(c2.bio.gamma_star == c.bio.gamma_star);
    CHECK(c2.scheme.order == c.scheme.order);
  }
}

TEST_CASE("snapshot round trip is bit exact") {
  TempDir tmp;
  auto f = ConfigFile::parse_string(
      "[grid]\ncells = 7\nlayers = 3\n[init]\nh = 0.51\nu = 0.123456789012345\n"
      "t = 3.14159\nc1 = 25\nc2 = 5\nc3 = 5\n[bio]\ntime_offset_days = 0.25\n");
  RunConfig cfg = config_from_ini(f);
  Solver s = build_solver(cfg);
  // scatter irrational-ish values
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 7; ++i) {
      s.u().at(a, i) = std::sqrt(2.0 + a) / (i + 3.0);
      s.tracer().at(a, i) = std::exp(-0.1 * (a + i * 0.7));
    }
  s.step();
  SnapshotRecord snap = make_snapshot(s);
  const std::string path = (tmp.path / snapshot_filename(snap.time)).string();
  write_snapshot_csv(path, s.grid(), snap);
  const SnapshotRecord back = read_snapshot_csv(path, s.grid());
  CHECK(back.time == snap.time);
  for (int i = 0; i < 7; ++i) CHECK(back.H[i] == snap.H[i]);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 7; ++i) {
      CHECK(back.u.at(a, i) == snap.u.at(a, i));
      CHECK(back.w.at(a, i) == snap.w.at(a, i));
      CHECK(back.T.at(a, i) == snap.T.at(a, i));
      CHECK(back.rho.at(a, i) == snap.rho.at(a, i));
      CHECK(back.c1.at(a, i) == snap.c1.at(a, i));
      CHECK(back.light.at(a, i) == snap.light.at(a, i));
    }
}

TEST_CASE("snapshot has one row per cell-layer pair") {
  TempDir tmp;
  auto f = ConfigFile::parse_string("[grid]\ncells = 6\nlayers = 4\n");
  RunConfig cfg = config_from_ini(f);
  Solver s = build_solver(cfg);
  SnapshotRecord snap = make_snapshot(s);
  const std::string path = (tmp.path / "snap.csv").string();
  write_snapshot_csv(path, s.grid(), snap);
  std::ifstream in(path);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 24);
}

TEST_CASE("timeseries rows are deterministic for a fixed config") {
  TempDir tmp;
  auto run_once = [&](const std::string& name) {
    auto f = ConfigFile::parse_string(
        "[grid]\ncells = 30\nlayers = 3\n[init]\nh = 0.5\nu = 0.3\n"
        "[wheel]\nenabled = true\nomega = 0.85\n[run]\nduration = 5\n"
        "[output]\ntimeseries_interval = 1\n");
    RunConfig cfg = config_from_ini(f);
    Solver s = build_solver(cfg);
    const std::string path = (tmp.path / name).string();
    {
      TimeseriesWriter w(path);
      RunCallbacks cb;
      cb.on_timeseries = [&](const Solver& sv) { w.row(sv); };
      run_simulation(s, cfg, cb);
    }
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = run_once("a.csv"), b = run_once("b.csv");
  CHECK(a == b);
  CHECK(a.find("time,volume,H_mean") == 0);
}

TEST_CASE("zero-duration run produces only the initial records") {
  auto f = ConfigFile::parse_string("[run]\nduration = 0\n[grid]\ncells = 5\nlayers = 2\n");
  RunConfig cfg = config_from_ini(f);
  Solver s = build_solver(cfg);
  int snaps = 0, rows = 0;
  RunCallbacks cb;
  cb.on_snapshot = [&](Solver&) { ++snaps; };
  cb.on_timeseries = [&](const Solver&) { ++rows; };
  const RunResult r = run_simulation(s, cfg, cb);
  CHECK(r.steps == 0);
  CHECK(snaps == 1);
  CHECK(rows == 1);
}

TEST_CASE("particle trace files round trip") {
  TempDir tmp;
  ParticleSet ps;
  ps.x = {1.0, 2.0};
  ps.z = {0.1, 0.2};
  ps.light.resize(2);
  ps.trace_x.resize(2);
  ps.trace_z.resize(2);
  for (int s = 0; s < 5; ++s) {
    ps.sample_time.push_back(0.5 * s);
    ps.sample_I0.push_back(100.0 + s);
    for (int k = 0; k < 2; ++k) {
      ps.light[k].push_back(10.0 * k + s + 0.125);
      ps.trace_x[k].push_back(k + 0.01 * s);
      ps.trace_z[k].push_back(0.3 - 0.01 * s);
    }
  }
  const std::string dir = (tmp.path / "traces").string();
  write_particle_traces(dir, ps);
  ParticleSet back = read_particle_traces(dir);
  CHECK(back.count() == 2);
  REQUIRE(back.sample_time.size() == 5);
  for (int s = 0; s < 5; ++s) {
    CHECK(back.sample_time[s] == ps.sample_time[s]);
    CHECK(back.sample_I0[s] == ps.sample_I0[s]);
    for (int k = 0; k < 2; ++k) CHECK(back.light[k][s] == ps.light[k][s]);
  }
  const ExposureStats st = light_exposure_stats(back, 0.5);
  write_exposure_stats(dir + "/summary.csv", st);
  CHECK(fs::exists(dir + "/summary.csv"));
}

TEST_CASE("boundary pairing is validated at build time") {
  auto f = ConfigFile::parse_string(
      "[bc]\nleft = periodic\nright = height\nright_height = 0.5\n");
  CHECK_THROWS(build_solver(config_from_ini(f)));
}
