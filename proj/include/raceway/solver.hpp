#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "raceway/biology.hpp"
#include "raceway/field.hpp"
#include "raceway/grid.hpp"
#include "raceway/kernels.hpp"
#include "raceway/phys.hpp"
#include "raceway/wheel.hpp"

namespace raceway {

/// Numerical scheme knobs.
struct SchemeOptions {
  int order = 1;       // 1: upwind kinetic, 2: minmod MUSCL + Heun
  double cfl = 0.0;    // 0 selects the per-order default
  double dt_max = 0.5; // s
  double dry_h = 1e-8; // m, cells thinner than this are treated as dry
  int bio_stride = 1;  // apply reactions every k hydro steps
  bool bio_reactions = true;
  bool limiter = true; // minmod on; off = unlimited centered slopes
  bool force_scalar_kernels = false;

  double effective_cfl() const { return cfl > 0.0 ? cfl : (order == 2 ? 0.45 : 0.9); }
  void validate() const;
};

/// Imposed-inflow data for one boundary (per-layer discharges).
struct BoundaryProfile {
  double H = 0.0;
  std::vector<double> q;            // layer discharges h_a u_a, bottom to top
  std::vector<double> T, c1, c2, c3;
};

struct BoundaryCondition {
  enum class Kind { periodic, discharge, height };
  Kind kind = Kind::periodic;
  BoundaryProfile profile;                  // adjacent ghost column
  std::optional<BoundaryProfile> profile_outer;  // second ghost; defaults to profile
  double height = 0.0;
};

/// Hard failure of the explicit step (CFL contract violated or state
/// corrupted); carries the failing step and cell.
struct SolverError : std::runtime_error {
  SolverError(const std::string& msg, long step, int cell)
      : std::runtime_error(msg + " (step " + std::to_string(step) + ", cell " +
                           std::to_string(cell) + ")"),
        step(step), cell(cell) {}
  long step;
  int cell;
};

/// One-dimensional multilayer solver advancing (H, u_a, T_a, C_a^j).
///
/// Each step splits into (i) an explicit kinetic transport step carrying
/// mass, momentum, tracer and biology with interlayer exchange, pressure
/// interface terms, paddlewheel forcing and reaction sources, and (ii) a
/// semi-implicit vertical diffusion/bottom friction solve per column.
class Solver {
 public:
  Solver(GridSpec grid, PhysParams phys, WheelConfig wheel, BioParams bio,
         SchemeOptions scheme, BoundaryCondition left, BoundaryCondition right);

  // State access (interior cells; ghosts are managed internally).
  Field& height() { return st_.H; }
  Field& u() { return st_.u; }
  Field& tracer() { return st_.T; }
  Field& bio(int j);
  const Field& height() const { return st_.H; }
  const Field& u() const { return st_.u; }
  const Field& tracer() const { return st_.T; }
  const Field& bio(int j) const;
  const Field& w() const { return w_; }
  const Field& light() const { return light_; }

  const GridSpec& grid() const { return grid_; }
  const PhysParams& phys() const { return phys_; }
  const BioParams& bio_params() const { return bio_; }
  const SchemeOptions& scheme() const { return scheme_; }

  void set_uniform(double H0, double u0, double T0, double c10, double c20, double c30);
  /// Optional per-(layer, cell) tracer reaction rate f (s^-1): dT/dt = f T.
  void set_tracer_reaction(Field f);

  double time() const { return t_; }
  void set_time(double t) { t_ = t; }
  long step_count() const { return steps_; }
  double last_dt() const { return dt_last_; }

  /// CFL time step of the current state (capped at dt_max).
  double compute_dt() const;

  /// Advances one split step; dt_cap additionally bounds the step (for
  /// landing exactly on output times). Returns the dt taken.
  double step(std::optional<double> dt_cap = std::nullopt);

  /// Advances with a caller-chosen dt, bypassing the CFL computation.
  /// Oversized steps violate the positivity contract and fail hard.
  void step_with_dt(double dt) {
    speed_fresh_ = false;  // the state may have been edited since compute_dt
    step_core(dt);
  }

  /// Mass (m) exchanged through layer interface `iface` of column `cell`
  /// during the last transport stage, i.e. dt * G_{iface}. Interface 0 is
  /// the bed, n_layers the free surface (both identically zero).
  double exchange_mass(int iface, int cell) const { return gdt_row(iface)[cell]; }

  /// Recomputes the diagnostic light field and vertical velocity.
  void refresh_diagnostics();

  // Deterministic (compensated) global sums and bounds.
  double total_volume() const;
  double total_tracer_mass() const;
  double total_bio_mass(int j) const;
  std::pair<double, double> tracer_range() const;
  std::pair<double, double> bio_range(int j) const;
  double min_height() const;

  long pressure_clamp_count() const { return pressure_clamps_; }
  long particle_clamp_count() const { return 0; }
  const char* kernel_name() const;

 private:
  struct State {
    Field H;  // 1 x cells
    Field u, T, c1, c2, c3;
  };

  void step_core(double dt);
  void fill_ghosts(State& s) const;
  void compute_wheel_arrays(const Field& H, double t);
  void compute_speed(const Field& H, const Field& T, Field& c_out, Field* p_iface_out,
                     bool with_wheel);
  void reconstruct(const State& s, State& eL, State& eR) const;
  void stage(State& in, double dt, double t, State& out);
  void diffusion_friction(State& s, double dt);
  void horizontal_diffusion(State& s, Field& Y, double mu, double dt);
  void apply_reactions(State& s, double dt_bio, double t_now);
  double* gdt_row(int iface) { return gdt_.data() + static_cast<size_t>(iface) * grid_.n_cells; }
  const double* gdt_row(int iface) const {
    return gdt_.data() + static_cast<size_t>(iface) * grid_.n_cells;
  }

  GridSpec grid_;
  PhysParams phys_;
  WheelConfig wheel_;
  BioParams bio_;
  SchemeOptions scheme_;
  BoundaryCondition left_, right_;
  kernels::HalfFluxFn kernel_;

  State st_, s1_, s2_;
  Field zb_;  // bed with ghost columns
  Field cS_, cL_, cR_;
  Field pIf_;                    // cell-centered interface pressures, (N+1) rows
  Field fpH_, fpQ_, fmH_, fmQ_;  // half fluxes per cell
  State eL_, eR_;                // reconstructed edge states
  std::vector<double> ifxH_, ifxQ_;  // interface fluxes, (layers) x (cells+1)
  std::vector<double> ifxY_;         // scratch row for passive fields
  std::vector<double> gdt_;          // dt * G, (layers+1) interface rows x cells
  std::vector<double> sigma_, divH_; // per-cell dt/dx and flux divergence
  std::vector<double> hrow_;         // scratch layer-mass row
  std::vector<double> scratch1_, scratch2_;
  Field hrec_, invHrec_;             // post-update layer masses and reciprocals
  Field fxL_, fzDbl_, fzIf_;         // wheel integrals (fzIf_ has N+1 rows)
  int wheel_lo_ = 0, wheel_hi_ = -1; // cell range touched by the wheel
  std::vector<WheelSlice> wsl_edge_, wsl_center_;
  bool speed_fresh_ = false;  // cS_/pIf_/wheel arrays already match (state, t)
  std::vector<double> prev_H_;
  Field w_, light_;
  std::optional<Field> tracer_reaction_;
  std::vector<double> col_a_, col_b_, col_c_, col_r_;  // tridiagonal scratch

  double t_ = 0.0;
  double dt_last_ = 0.0;
  double bio_accum_ = 0.0;
  long steps_ = 0;
  long pressure_clamps_ = 0;
  bool have_prev_ = false;
};

}  // namespace raceway
