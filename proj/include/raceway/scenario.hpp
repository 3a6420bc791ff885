#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "raceway/analytic.hpp"
#include "raceway/config.hpp"
#include "raceway/snapshot.hpp"
#include "raceway/solver.hpp"

namespace raceway {

/// Fully resolved run description; every field has a shipped default so a
/// minimal config stays small.
struct RunConfig {
  // [grid]
  double length = 20.0;
  int cells = 100;
  int layers = 10;
  std::string topography = "flat";  // flat | two_gauss
  double bump1_amp = 0.2, bump1_x = 8.0, bump2_amp = -0.4, bump2_x = 12.0;
  std::vector<double> layer_fractions;  // empty = uniform

  PhysParams phys;
  WheelConfig wheel;
  BioParams bio;
  SchemeOptions scheme;

  // [init]
  double H0 = 0.5, u0 = 0.0, T0 = 0.0, c1_0 = 0.0, c2_0 = 0.0, c3_0 = 0.0;
  bool init_analytic_height = false;
  bool init_analytic_tracer = false;
  std::string tracer_pattern = "uniform";  // uniform | left_half
  std::vector<double> c1_profile, c2_profile, c3_profile, T_profile;  // per layer

  // [bc]
  std::string bc_left = "periodic";   // periodic | discharge_analytic
  std::string bc_right = "periodic";  // periodic | height | height_analytic
  double right_height = 0.5;

  // [analytic]
  double an_alpha = 0.4, an_beta = 1.5, an_H_ref = 0.5, an_x_ref = 8.0;
  bool analytic_tracer_reaction = false;

  // [output]
  std::string out_dir = "out";
  double timeseries_interval = 1.0;
  double snapshot_interval = 0.0;  // 0: initial/final snapshots only
  double snapshot_start = 0.0;

  // [run]
  double duration = 100.0;

  // [particles]
  int particle_count = 100;
  double particle_x_seed = 15.0;
  double particle_dt = 0.05;
  double particle_threshold = 0.5;
  uint64_t particle_seed = 0;
};

/// Parses and validates a config file against the documented schema.
RunConfig load_config(const std::string& path);
RunConfig config_from_ini(const ConfigFile& file);

/// Serialises the fully resolved configuration back to INI text (written
/// next to run outputs for provenance).
std::string to_ini(const RunConfig& cfg);

TopographyFn make_topography(const RunConfig& cfg);
AnalyticCase make_analytic_case(const RunConfig& cfg);

/// Builds the solver with grid, boundary profiles, initial state and the
/// optional analytic tracer-reaction source.
Solver build_solver(const RunConfig& cfg);

SnapshotRecord make_snapshot(Solver& solver);

struct RunCallbacks {
  std::function<void(Solver&)> on_snapshot;          // diagnostics refreshed
  std::function<void(const Solver&)> on_timeseries;
};

struct RunResult {
  long steps = 0;
  double final_time = 0.0;
};

/// Advances the solver to cfg.duration, firing callbacks on the configured
/// cadences (time steps are capped so outputs land on exact times).
RunResult run_simulation(Solver& solver, const RunConfig& cfg, const RunCallbacks& cb);

}  // namespace raceway
