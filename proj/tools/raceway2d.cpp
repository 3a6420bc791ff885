// Command-line front end: run simulations, validate against the analytic
// steady state, build Lagrangian trajectories from stored snapshots, and
// summarize enlightenment statistics.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "raceway/analytic.hpp"
#include "raceway/config.hpp"
#include "raceway/particles.hpp"
#include "raceway/scenario.hpp"
#include "raceway/writers.hpp"

namespace fs = std::filesystem;
using namespace raceway;

namespace {

struct Overrides {
  double duration = -1.0;
  int order = 0;
  double omega = -1.0;
  long seed = -1;
  int cells = 0, layers = 0;
  std::string out_dir;
};

RunConfig load_with_overrides(const std::string& path, const Overrides& ov) {
  RunConfig cfg = load_config(path);
  if (ov.duration >= 0.0) cfg.duration = ov.duration;
  if (ov.order > 0) cfg.scheme.order = ov.order;
  if (ov.omega >= 0.0) cfg.wheel.omega = ov.omega;
  if (ov.seed >= 0) cfg.particle_seed = static_cast<uint64_t>(ov.seed);
  if (ov.cells > 0) cfg.cells = ov.cells;
  if (ov.layers > 0) {
    cfg.layers = ov.layers;
    cfg.layer_fractions.clear();
  }
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  cfg.scheme.validate();
  return cfg;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
  RunConfig cfg = load_with_overrides(config_path, ov);
  Solver solver = build_solver(cfg);

  fs::create_directories(cfg.out_dir);
  fs::create_directories(cfg.out_dir + "/snapshots");
  write_text_file(cfg.out_dir + "/resolved_config.ini", to_ini(cfg));
  TimeseriesWriter ts(cfg.out_dir + "/timeseries.csv");

  RunCallbacks cb;
  cb.on_timeseries = [&](const Solver& s) { ts.row(s); };
  cb.on_snapshot = [&](Solver& s) {
    const SnapshotRecord snap = make_snapshot(s);
    write_snapshot_csv(cfg.out_dir + "/snapshots/" + snapshot_filename(snap.time),
                       s.grid(), snap);
  };

  const RunResult res = run_simulation(solver, cfg, cb);
  ts.flush();
  std::printf("run complete: t = %.6g s, %ld steps, kernel = %s\n", res.final_time,
              res.steps, solver.kernel_name());
  std::printf("outputs in %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_validate(const std::string& config_path, const Overrides& ov) {
  RunConfig cfg = load_with_overrides(config_path, ov);
  Solver solver = build_solver(cfg);
  const AnalyticCase ac = make_analytic_case(cfg);

  RunCallbacks cb;  // no outputs; this is a pure validation run
  run_simulation(solver, cfg, cb);

  const GridSpec& g = solver.grid();
  double num_u = 0.0, den_u = 0.0, num_T = 0.0, den_T = 0.0, num_H = 0.0, den_H = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    const double Ha = ac.surface_height(g.x_center[i]);
    const auto ua = ac.layer_mean_u(g.x_center[i], g.frac_cum);
    const auto Ta = ac.layer_mean_tracer(g.x_center[i], g.frac_cum);
    num_H += (solver.height().at(0, i) - Ha) * (solver.height().at(0, i) - Ha);
    den_H += Ha * Ha;
    for (int a = 0; a < g.n_layers; ++a) {
      const double du = solver.u().at(a, i) - ua[a];
      const double dT = solver.tracer().at(a, i) - Ta[a];
      num_u += du * du;
      den_u += ua[a] * ua[a];
      num_T += dT * dT;
      den_T += Ta[a] * Ta[a];
    }
  }
  const double eu = std::sqrt(num_u / den_u);
  const double eT = std::sqrt(num_T / den_T);
  const double eH = std::sqrt(num_H / den_H);
  std::printf("analytic validation after %.6g s (%d cells x %d layers, order %d)\n",
              solver.time(), g.n_cells, g.n_layers, cfg.scheme.order);
  std::printf("  rel L2 error: u %.4g  T %.4g  H %.4g\n", eu, eT, eH);

  const auto rn = residual_check(ac, 0.0, cfg.length, 128, 32);
  std::printf("  analytic-field FD residuals (128x32): incomp %.3g  kin_b %.3g  kin_s %.3g"
              "  tracer %.3g  momentum %.3g\n",
              rn.incompressibility, rn.kinematic_bottom, rn.kinematic_surface,
              rn.tracer_equilibrium, rn.momentum);
  return 0;
}

int cmd_particles(const std::string& config_path, const std::string& snap_dir,
                  const Overrides& ov) {
  RunConfig cfg = load_with_overrides(config_path, ov);
  std::vector<double> fractions = cfg.layer_fractions;
  if (fractions.empty()) fractions.assign(cfg.layers, 1.0 / cfg.layers);
  GridSpec grid = build_grid(cfg.length, cfg.cells, cfg.layers, fractions,
                             make_topography(cfg));

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(snap_dir))
    if (e.path().filename().string().rfind("snapshot_", 0) == 0) files.push_back(e.path());
  if (files.size() < 2)
    throw ConfigError("particles: need at least two snapshots in " + snap_dir);
  std::sort(files.begin(), files.end());

  SnapshotRecord prev = read_snapshot_csv(files[0].string(), grid);
  prev.I0 = surface_light(cfg.bio, prev.time / 86400.0 + cfg.bio.time_offset_days);
  ParticleSet ps = seed_particles(grid, prev, cfg.particle_count, cfg.particle_x_seed,
                                  cfg.particle_seed);
  record_sample(ps, grid, prev);
  const bool periodic = cfg.bc_left == "periodic";
  for (size_t k = 1; k < files.size(); ++k) {
    SnapshotRecord next = read_snapshot_csv(files[k].string(), grid);
    next.I0 = surface_light(cfg.bio, next.time / 86400.0 + cfg.bio.time_offset_days);
    advect_particles(ps, grid, prev, next, cfg.particle_dt, periodic);
    prev = std::move(next);
  }

  const std::string out = cfg.out_dir + "/particles";
  write_particle_traces(out, ps);
  const ExposureStats st = light_exposure_stats(ps, cfg.particle_threshold);
  write_exposure_stats(out + "/summary.csv", st);
  if (st.defined)
    std::printf("%d particles over %zu snapshots: mean high-light fraction %.3f, "
                "never-high %d (traces in %s)\n",
                ps.count(), files.size(), st.mean_fraction, st.never_high, out.c_str());
  else
    std::printf("%d particles tracked, but no daylight samples: statistics undefined\n",
                ps.count());
  return 0;
}

int cmd_stats(const std::string& trace_dir, double threshold) {
  ParticleSet ps = read_particle_traces(trace_dir);
  const ExposureStats st = light_exposure_stats(ps, threshold);
  write_exposure_stats(trace_dir + "/summary.csv", st);
  if (!st.defined) {
    std::printf("no daylight samples: statistics undefined\n");
    return 0;
  }
  std::printf("particles: %d\nmean high-light fraction: %.4f\nnever high: %d\n",
              ps.count(), st.mean_fraction, st.never_high);
  std::printf("histogram (5%% classes):");
  for (int b = 0; b < 20; ++b) std::printf(" %d", st.histogram[b]);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D multilayer raceway-pond simulator (hydrodynamics + algae growth)"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path, snap_dir, trace_dir;
  double threshold = 0.5;

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--duration", ov.duration, "override run duration (s)");
    sub->add_option("--order", ov.order, "override scheme order (1 or 2)");
    sub->add_option("--omega", ov.omega, "override wheel angular speed (rad/s)");
    sub->add_option("--seed", ov.seed, "override particle seeding jitter seed");
    sub->add_option("--cells", ov.cells, "override horizontal cell count");
    sub->add_option("--layers", ov.layers, "override layer count (uniform fractions)");
    sub->add_option("--out", ov.out_dir, "override output directory");
  };

  auto* run = app.add_subcommand("run", "advance a scenario and write outputs");
  run->add_option("config", config_path, "run configuration file")->required();
  add_overrides(run);

  auto* val = app.add_subcommand("validate-analytic",
                                 "run a scenario and compare with the analytic steady state");
  val->add_option("config", config_path, "run configuration file")->required();
  add_overrides(val);

  auto* par = app.add_subcommand("particles", "trace particles through stored snapshots");
  par->add_option("config", config_path, "run configuration file")->required();
  par->add_option("snapshots", snap_dir, "directory of snapshot_*.csv files")->required();
  add_overrides(par);

  auto* st = app.add_subcommand("stats", "recompute statistics from particle traces");
  st->add_option("trace_dir", trace_dir, "directory of p*.csv trace files")->required();
  st->add_option("--threshold", threshold, "high-enlightenment fraction of I0");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, ov);
    if (val->parsed()) return cmd_validate(config_path, ov);
    if (par->parsed()) return cmd_particles(config_path, snap_dir, ov);
    if (st->parsed()) return cmd_stats(trace_dir, threshold);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
