#include "raceway/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace raceway {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"grid",
       {"length", "cells", "layers", "topography", "bump1_amp", "bump1_x", "bump2_amp",
        "bump2_x", "layer_fractions"}},
      {"physics", {"g", "rho0", "t0", "alpha_t", "mu", "kappa", "mu_t", "mu_c"}},
      {"wheel",
       {"enabled", "x_center", "z_center", "radius", "omega", "force_coeff",
        "blade_half_angle", "theta0", "n_blades"}},
      {"bio",
       {"reactions", "mu_tilde", "q0", "q_l", "k_ii", "k_si", "lambda_bar", "k3", "r",
        "i0_max", "gamma_star", "k_istar", "atten_a", "atten_b", "time_offset_days"}},
      {"init",
       {"h", "u", "t", "c1", "c2", "c3", "tracer_pattern", "c1_profile", "c2_profile",
        "c3_profile", "t_profile"}},
      {"bc", {"left", "right", "right_height"}},
      {"analytic", {"alpha", "beta", "h_ref", "x_ref", "tracer_reaction"}},
      {"scheme",
       {"order", "cfl", "dt_max", "dry_h", "bio_stride", "limiter", "force_scalar_kernels"}},
      {"output", {"dir", "timeseries_interval", "snapshot_interval", "snapshot_start"}},
      {"run", {"duration"}},
      {"particles", {"count", "x_seed", "dt", "threshold", "seed"}},
  };
  return s;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  return config_from_ini(ConfigFile::parse_file(path));
}

RunConfig config_from_ini(const ConfigFile& f) {
  f.check_schema(schema());
  RunConfig c;

  c.length = f.get_double("grid", "length", c.length);
  c.cells = f.get_int("grid", "cells", c.cells);
  c.layers = f.get_int("grid", "layers", c.layers);
  c.topography = f.get_string("grid", "topography", c.topography);
  c.bump1_amp = f.get_double("grid", "bump1_amp", c.bump1_amp);
  c.bump1_x = f.get_double("grid", "bump1_x", c.bump1_x);
  c.bump2_amp = f.get_double("grid", "bump2_amp", c.bump2_amp);
  c.bump2_x = f.get_double("grid", "bump2_x", c.bump2_x);
  c.layer_fractions = f.get_list("grid", "layer_fractions");
  if (c.topography != "flat" && c.topography != "two_gauss")
    throw ConfigError(f.name() + ": topography must be 'flat' or 'two_gauss'");

  c.phys.g = f.get_double("physics", "g", c.phys.g);
  c.phys.rho0 = f.get_double("physics", "rho0", c.phys.rho0);
  c.phys.T0 = f.get_double("physics", "t0", c.phys.T0);
  c.phys.alpha_T = f.get_double("physics", "alpha_t", c.phys.alpha_T);
  c.phys.mu = f.get_double("physics", "mu", c.phys.mu);
  c.phys.kappa = f.get_double("physics", "kappa", c.phys.kappa);
  c.phys.mu_T = f.get_double("physics", "mu_t", c.phys.mu_T);
  c.phys.mu_C = f.get_double("physics", "mu_c", c.phys.mu_C);

  c.wheel.enabled = f.get_bool("wheel", "enabled", c.wheel.enabled);
  c.wheel.x_center = f.get_double("wheel", "x_center", c.wheel.x_center);
  c.wheel.z_center = f.get_double("wheel", "z_center", c.wheel.z_center);
  c.wheel.radius = f.get_double("wheel", "radius", c.wheel.radius);
  c.wheel.omega = f.get_double("wheel", "omega", c.wheel.omega);
  c.wheel.force_coeff = f.get_double("wheel", "force_coeff", c.wheel.force_coeff);
  c.wheel.blade_half_angle = f.get_double("wheel", "blade_half_angle", c.wheel.blade_half_angle);
  c.wheel.theta0 = f.get_double("wheel", "theta0", c.wheel.theta0);
  c.wheel.n_blades = f.get_int("wheel", "n_blades", c.wheel.n_blades);

  c.scheme.bio_reactions = f.get_bool("bio", "reactions", c.scheme.bio_reactions);
  c.bio.mu_tilde = f.get_double("bio", "mu_tilde", c.bio.mu_tilde);
  c.bio.Q0 = f.get_double("bio", "q0", c.bio.Q0);
  c.bio.Q_l = f.get_double("bio", "q_l", c.bio.Q_l);
  c.bio.K_iI = f.get_double("bio", "k_ii", c.bio.K_iI);
  c.bio.K_sI = f.get_double("bio", "k_si", c.bio.K_sI);
  c.bio.lambda_bar = f.get_double("bio", "lambda_bar", c.bio.lambda_bar);
  c.bio.K3 = f.get_double("bio", "k3", c.bio.K3);
  c.bio.R = f.get_double("bio", "r", c.bio.R);
  c.bio.I0_max = f.get_double("bio", "i0_max", c.bio.I0_max);
  c.bio.gamma_star = f.get_double("bio", "gamma_star", c.bio.gamma_star);
  c.bio.k_Istar = f.get_double("bio", "k_istar", c.bio.k_Istar);
  c.bio.atten_a = f.get_double("bio", "atten_a", c.bio.atten_a);
  c.bio.atten_b = f.get_double("bio", "atten_b", c.bio.atten_b);
  c.bio.time_offset_days = f.get_double("bio", "time_offset_days", c.bio.time_offset_days);

  const std::string h_init = f.get_string("init", "h", "");
  if (h_init == "analytic")
    c.init_analytic_height = true;
  else if (!h_init.empty())
    c.H0 = f.get_double("init", "h", c.H0);
  const std::string t_init = f.get_string("init", "t", "");
  if (t_init == "analytic")
    c.init_analytic_tracer = true;
  else if (!t_init.empty())
    c.T0 = f.get_double("init", "t", c.T0);
  c.u0 = f.get_double("init", "u", c.u0);
  c.c1_0 = f.get_double("init", "c1", c.c1_0);
  c.c2_0 = f.get_double("init", "c2", c.c2_0);
  c.c3_0 = f.get_double("init", "c3", c.c3_0);
  c.tracer_pattern = f.get_string("init", "tracer_pattern", c.tracer_pattern);
  c.c1_profile = f.get_list("init", "c1_profile");
  c.c2_profile = f.get_list("init", "c2_profile");
  c.c3_profile = f.get_list("init", "c3_profile");
  c.T_profile = f.get_list("init", "t_profile");
  if (c.tracer_pattern != "uniform" && c.tracer_pattern != "left_half")
    throw ConfigError(f.name() + ": tracer_pattern must be 'uniform' or 'left_half'");

  c.bc_left = f.get_string("bc", "left", c.bc_left);
  c.bc_right = f.get_string("bc", "right", c.bc_right);
  c.right_height = f.get_double("bc", "right_height", c.right_height);

  c.an_alpha = f.get_double("analytic", "alpha", c.an_alpha);
  c.an_beta = f.get_double("analytic", "beta", c.an_beta);
  c.an_H_ref = f.get_double("analytic", "h_ref", c.an_H_ref);
  c.an_x_ref = f.get_double("analytic", "x_ref", c.an_x_ref);
  c.analytic_tracer_reaction = f.get_bool("analytic", "tracer_reaction",
                                          c.analytic_tracer_reaction);

  c.scheme.order = f.get_int("scheme", "order", c.scheme.order);
  c.scheme.cfl = f.get_double("scheme", "cfl", c.scheme.cfl);
  c.scheme.dt_max = f.get_double("scheme", "dt_max", c.scheme.dt_max);
  c.scheme.dry_h = f.get_double("scheme", "dry_h", c.scheme.dry_h);
  c.scheme.bio_stride = f.get_int("scheme", "bio_stride", c.scheme.bio_stride);
  c.scheme.limiter = f.get_bool("scheme", "limiter", c.scheme.limiter);
  c.scheme.force_scalar_kernels =
      f.get_bool("scheme", "force_scalar_kernels", c.scheme.force_scalar_kernels);

  c.out_dir = f.get_string("output", "dir", c.out_dir);
  c.timeseries_interval = f.get_double("output", "timeseries_interval", c.timeseries_interval);
  c.snapshot_interval = f.get_double("output", "snapshot_interval", c.snapshot_interval);
  c.snapshot_start = f.get_double("output", "snapshot_start", c.snapshot_start);

  c.duration = f.get_double("run", "duration", c.duration);
  if (c.duration < 0.0) throw ConfigError(f.name() + ": duration must be >= 0");

  c.particle_count = f.get_int("particles", "count", c.particle_count);
  c.particle_x_seed = f.get_double("particles", "x_seed", c.particle_x_seed);
  c.particle_dt = f.get_double("particles", "dt", c.particle_dt);
  c.particle_threshold = f.get_double("particles", "threshold", c.particle_threshold);
  c.particle_seed = static_cast<uint64_t>(f.get_int("particles", "seed", 0));

  // surface validation of cross-field constraints; Solver re-validates
  try {
    c.phys.validate();
    c.wheel.validate();
    c.bio.validate();
    c.scheme.validate();
  } catch (const std::exception& e) {
    throw ConfigError(f.name() + ": " + e.what());
  }
  return c;
}

TopographyFn make_topography(const RunConfig& cfg) {
  if (cfg.topography == "two_gauss") {
    const double a1 = cfg.bump1_amp, x1 = cfg.bump1_x;
    const double a2 = cfg.bump2_amp, x2 = cfg.bump2_x;
    return [a1, x1, a2, x2](double x) {
      const double d1 = x - x1, d2 = x - x2;
      return a1 * std::exp(-d1 * d1) + a2 * std::exp(-d2 * d2);
    };
  }
  return [](double) { return 0.0; };
}

AnalyticCase make_analytic_case(const RunConfig& cfg) {
  AnalyticCase c;
  c.alpha = cfg.an_alpha;
  c.beta = cfg.an_beta;
  c.H_ref = cfg.an_H_ref;
  c.x_ref = cfg.an_x_ref;
  c.g = cfg.phys.g;
  c.z_b = make_topography(cfg);
  if (cfg.topography == "two_gauss") {
    const double a1 = cfg.bump1_amp, x1 = cfg.bump1_x;
    const double a2 = cfg.bump2_amp, x2 = cfg.bump2_x;
    c.dz_b = [a1, x1, a2, x2](double x) {
      const double d1 = x - x1, d2 = x - x2;
      return -2.0 * d1 * a1 * std::exp(-d1 * d1) - 2.0 * d2 * a2 * std::exp(-d2 * d2);
    };
  } else {
    c.dz_b = [](double) { return 0.0; };
  }
  return c;
}

Solver build_solver(const RunConfig& cfg) {
  std::vector<double> fractions = cfg.layer_fractions;
  if (fractions.empty()) fractions.assign(cfg.layers, 1.0 / cfg.layers);
  GridSpec grid = build_grid(cfg.length, cfg.cells, cfg.layers, fractions,
                             make_topography(cfg));

  const bool needs_analytic = cfg.bc_left == "discharge_analytic" ||
                              cfg.bc_right == "height_analytic" ||
                              cfg.init_analytic_height || cfg.init_analytic_tracer ||
                              cfg.analytic_tracer_reaction;
  AnalyticCase ac;
  if (needs_analytic) ac = make_analytic_case(cfg);

  BoundaryCondition left, right;
  const double dx = cfg.length / cfg.cells;
  auto discharge_profile = [&](double x) {
    BoundaryProfile p;
    p.H = ac.surface_height(x);
    p.q = ac.layer_discharges(x, grid.frac_cum);
    p.T = ac.layer_mean_tracer(x, grid.frac_cum);
    p.c1.assign(cfg.layers, 0.0);
    p.c2.assign(cfg.layers, 0.0);
    p.c3.assign(cfg.layers, 0.0);
    return p;
  };
  if (cfg.bc_left == "periodic") {
    left.kind = BoundaryCondition::Kind::periodic;
  } else if (cfg.bc_left == "discharge_analytic") {
    left.kind = BoundaryCondition::Kind::discharge;
    left.profile = discharge_profile(-0.5 * dx);
    left.profile_outer = discharge_profile(-1.5 * dx);
  } else {
    throw ConfigError("bc: left must be 'periodic' or 'discharge_analytic'");
  }
  if (cfg.bc_right == "periodic") {
    right.kind = BoundaryCondition::Kind::periodic;
  } else if (cfg.bc_right == "height") {
    right.kind = BoundaryCondition::Kind::height;
    right.height = cfg.right_height;
  } else if (cfg.bc_right == "height_analytic") {
    right.kind = BoundaryCondition::Kind::height;
    right.height = ac.surface_height(cfg.length + 0.5 * dx);
  } else {
    throw ConfigError("bc: right must be 'periodic', 'height' or 'height_analytic'");
  }

  Solver solver(std::move(grid), cfg.phys, cfg.wheel, cfg.bio, cfg.scheme, left, right);
  const GridSpec& g = solver.grid();

  solver.set_uniform(cfg.H0, cfg.u0, cfg.T0, cfg.c1_0, cfg.c2_0, cfg.c3_0);
  for (int i = 0; i < g.n_cells; ++i) {
    if (cfg.init_analytic_height) solver.height().at(0, i) = ac.surface_height(g.x_center[i]);
    if (cfg.init_analytic_tracer) {
      const auto tm = ac.layer_mean_tracer(g.x_center[i], g.frac_cum);
      for (int a = 0; a < g.n_layers; ++a) solver.tracer().at(a, i) = tm[a];
    } else if (cfg.tracer_pattern == "left_half") {
      const double v = g.x_center[i] < 0.5 * cfg.length ? 1.0 : 0.0;
      for (int a = 0; a < g.n_layers; ++a) solver.tracer().at(a, i) = v;
    }
  }
  auto apply_profile = [&](Field& f, const std::vector<double>& prof) {
    if (prof.empty()) return;
    if (static_cast<int>(prof.size()) != g.n_layers)
      throw ConfigError("init: profile must have one value per layer");
    for (int a = 0; a < g.n_layers; ++a)
      for (int i = 0; i < g.n_cells; ++i) f.at(a, i) = prof[a];
  };
  apply_profile(solver.bio(1), cfg.c1_profile);
  apply_profile(solver.bio(2), cfg.c2_profile);
  apply_profile(solver.bio(3), cfg.c3_profile);
  apply_profile(solver.tracer(), cfg.T_profile);

  if (cfg.analytic_tracer_reaction) {
    // reaction rate frozen at the analytic layer midpoints; this is the
    // equilibrium geometry the tracer is driven towards
    Field f(g.n_layers, g.n_cells, 0.0);
    for (int i = 0; i < g.n_cells; ++i) {
      const double x = g.x_center[i];
      const double H = ac.surface_height(x);
      const double zb = ac.z_b(x);
      for (int a = 0; a < g.n_layers; ++a) {
        const double zm = zb + 0.5 * (g.frac_cum[a] + g.frac_cum[a + 1]) * H;
        f.at(a, i) = ac.reaction(x, zm);
      }
    }
    solver.set_tracer_reaction(std::move(f));
  }
  return solver;
}

SnapshotRecord make_snapshot(Solver& solver) {
  solver.refresh_diagnostics();
  const GridSpec& g = solver.grid();
  SnapshotRecord s;
  s.time = solver.time();
  s.I0 = surface_light(solver.bio_params(),
                       solver.time() / 86400.0 + solver.bio_params().time_offset_days);
  s.H.resize(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) s.H[i] = solver.height().at(0, i);
  s.u = solver.u();
  s.w = solver.w();
  s.T = solver.tracer();
  s.c1 = solver.bio(1);
  s.c2 = solver.bio(2);
  s.c3 = solver.bio(3);
  s.light = solver.light();
  s.rho = Field(g.n_layers, g.n_cells);
  for (int a = 0; a < g.n_layers; ++a)
    for (int i = 0; i < g.n_cells; ++i)
      s.rho.at(a, i) = density_of_tracer(solver.phys(), solver.tracer().at(a, i));
  return s;
}

RunResult run_simulation(Solver& solver, const RunConfig& cfg, const RunCallbacks& cb) {
  const double T = cfg.duration;
  const double eps = 1e-9 * std::max(1.0, T);
  const bool snaps = cfg.snapshot_interval > 0.0;

  if (cb.on_timeseries) cb.on_timeseries(solver);
  if (cb.on_snapshot && solver.time() + eps >= cfg.snapshot_start) cb.on_snapshot(solver);

  double next_ts = solver.time() + cfg.timeseries_interval;
  double next_snap = snaps ? std::max(cfg.snapshot_start, solver.time() + cfg.snapshot_interval)
                           : std::numeric_limits<double>::infinity();

  RunResult res;
  while (solver.time() < T - eps) {
    double cap = T - solver.time();
    if (cb.on_timeseries) cap = std::min(cap, next_ts - solver.time());
    if (cb.on_snapshot && snaps) cap = std::min(cap, next_snap - solver.time());
    solver.step(cap);
    ++res.steps;
    if (cb.on_timeseries && solver.time() + eps >= next_ts) {
      cb.on_timeseries(solver);
      next_ts += cfg.timeseries_interval;
    }
    if (cb.on_snapshot && snaps && solver.time() + eps >= next_snap) {
      cb.on_snapshot(solver);
      next_snap += cfg.snapshot_interval;
    }
  }
  // final records (skip duplicates when a cadence landed exactly on T)
  if (cb.on_timeseries && std::abs(next_ts - cfg.timeseries_interval - solver.time()) > eps)
    cb.on_timeseries(solver);
  if (cb.on_snapshot && !snaps && solver.time() > eps) cb.on_snapshot(solver);
  res.final_time = solver.time();
  return res;
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "[grid]\nlength = " << c.length << "\ncells = " << c.cells
    << "\nlayers = " << c.layers << "\ntopography = " << c.topography
    << "\nbump1_amp = " << c.bump1_amp << "\nbump1_x = " << c.bump1_x
    << "\nbump2_amp = " << c.bump2_amp << "\nbump2_x = " << c.bump2_x << "\n";
  if (!c.layer_fractions.empty()) {
    o << "layer_fractions = ";
    for (size_t i = 0; i < c.layer_fractions.size(); ++i)
      o << (i ? "," : "") << c.layer_fractions[i];
    o << "\n";
  }
  o << "\n[physics]\ng = " << c.phys.g << "\nrho0 = " << c.phys.rho0
    << "\nt0 = " << c.phys.T0 << "\nalpha_t = " << c.phys.alpha_T << "\nmu = " << c.phys.mu
    << "\nkappa = " << c.phys.kappa << "\nmu_t = " << c.phys.mu_T
    << "\nmu_c = " << c.phys.mu_C << "\n";
  o << "\n[wheel]\nenabled = " << (c.wheel.enabled ? "true" : "false")
    << "\nx_center = " << c.wheel.x_center << "\nz_center = " << c.wheel.z_center
    << "\nradius = " << c.wheel.radius << "\nomega = " << c.wheel.omega
    << "\nforce_coeff = " << c.wheel.force_coeff
    << "\nblade_half_angle = " << c.wheel.blade_half_angle << "\ntheta0 = " << c.wheel.theta0
    << "\nn_blades = " << c.wheel.n_blades << "\n";
  o << "\n[bio]\nreactions = " << (c.scheme.bio_reactions ? "true" : "false")
    << "\nmu_tilde = " << c.bio.mu_tilde << "\nq0 = " << c.bio.Q0 << "\nq_l = " << c.bio.Q_l
    << "\nk_ii = " << c.bio.K_iI << "\nk_si = " << c.bio.K_sI
    << "\nlambda_bar = " << c.bio.lambda_bar << "\nk3 = " << c.bio.K3 << "\nr = " << c.bio.R
    << "\ni0_max = " << c.bio.I0_max << "\ngamma_star = " << c.bio.gamma_star
    << "\nk_istar = " << c.bio.k_Istar << "\natten_a = " << c.bio.atten_a
    << "\natten_b = " << c.bio.atten_b << "\ntime_offset_days = " << c.bio.time_offset_days
    << "\n";
  o << "\n[init]\nh = " << (c.init_analytic_height ? "analytic" : std::to_string(c.H0))
    << "\nu = " << c.u0 << "\nt = "
    << (c.init_analytic_tracer ? "analytic" : std::to_string(c.T0)) << "\nc1 = " << c.c1_0
    << "\nc2 = " << c.c2_0 << "\nc3 = " << c.c3_0 << "\ntracer_pattern = " << c.tracer_pattern
    << "\n";
  o << "\n[bc]\nleft = " << c.bc_left << "\nright = " << c.bc_right
    << "\nright_height = " << c.right_height << "\n";
  o << "\n[analytic]\nalpha = " << c.an_alpha << "\nbeta = " << c.an_beta
    << "\nh_ref = " << c.an_H_ref << "\nx_ref = " << c.an_x_ref << "\ntracer_reaction = "
    << (c.analytic_tracer_reaction ? "true" : "false") << "\n";
  o << "\n[scheme]\norder = " << c.scheme.order << "\ncfl = " << c.scheme.effective_cfl()
    << "\ndt_max = " << c.scheme.dt_max << "\ndry_h = " << c.scheme.dry_h
    << "\nbio_stride = " << c.scheme.bio_stride << "\nlimiter = "
    << (c.scheme.limiter ? "true" : "false") << "\nforce_scalar_kernels = "
    << (c.scheme.force_scalar_kernels ? "true" : "false") << "\n";
  o << "\n[output]\ndir = " << c.out_dir
    << "\ntimeseries_interval = " << c.timeseries_interval
    << "\nsnapshot_interval = " << c.snapshot_interval
    << "\nsnapshot_start = " << c.snapshot_start << "\n";
  o << "\n[run]\nduration = " << c.duration << "\n";
  o << "\n[particles]\ncount = " << c.particle_count << "\nx_seed = " << c.particle_x_seed
    << "\ndt = " << c.particle_dt << "\nthreshold = " << c.particle_threshold
    << "\nseed = " << c.particle_seed << "\n";
  return o.str();
}

}  // namespace raceway
