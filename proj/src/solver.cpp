#include "raceway/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace raceway {

namespace {

constexpr double kDaySeconds = 86400.0;

double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

void SchemeOptions::validate() const {
  if (order != 1 && order != 2) throw std::invalid_argument("scheme: order must be 1 or 2");
  if (cfl < 0.0 || cfl > 1.0) throw std::invalid_argument("scheme: cfl must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw std::invalid_argument("scheme: dt_max must be positive");
  if (bio_stride < 1) throw std::invalid_argument("scheme: bio_stride must be >= 1");
  if (dry_h < 0.0) throw std::invalid_argument("scheme: dry_h must be >= 0");
}

Solver::Solver(GridSpec grid, PhysParams phys, WheelConfig wheel, BioParams bio,
               SchemeOptions scheme, BoundaryCondition left, BoundaryCondition right)
    : grid_(std::move(grid)), phys_(phys), wheel_(wheel), bio_(bio), scheme_(scheme),
      left_(std::move(left)), right_(std::move(right)),
      kernel_(kernels::select_half_flux_kernel(scheme.force_scalar_kernels)) {
  phys_.validate();
  wheel_.validate();
  bio_.validate();
  scheme_.validate();

  const bool lp = left_.kind == BoundaryCondition::Kind::periodic;
  const bool rp = right_.kind == BoundaryCondition::Kind::periodic;
  if (lp != rp)
    throw std::invalid_argument("boundary: periodic must be used on both sides");
  if (!lp) {
    const bool pair_ok = (left_.kind == BoundaryCondition::Kind::discharge &&
                          right_.kind == BoundaryCondition::Kind::height) ||
                         (left_.kind == BoundaryCondition::Kind::height &&
                          right_.kind == BoundaryCondition::Kind::discharge);
    if (!pair_ok)
      throw std::invalid_argument("boundary: imposed runs pair a discharge side with a height side");
  }
  for (const auto* b : {&left_, &right_}) {
    if (b->kind == BoundaryCondition::Kind::discharge) {
      const size_t N = grid_.n_layers;
      auto check = [N](const BoundaryProfile& p) {
        if (p.q.size() != N || p.T.size() != N || p.c1.size() != N || p.c2.size() != N ||
            p.c3.size() != N)
          throw std::invalid_argument(
              "boundary: discharge profile arrays must have one entry per layer");
        if (!(p.H > 0.0)) throw std::invalid_argument("boundary: discharge profile needs H > 0");
      };
      check(b->profile);
      if (b->profile_outer) check(*b->profile_outer);
    }
  }

  const int nl = grid_.n_layers, nc = grid_.n_cells;
  auto mk_state = [&] {
    State s;
    s.H = Field(1, nc);
    s.u = Field(nl, nc);
    s.T = Field(nl, nc);
    s.c1 = Field(nl, nc);
    s.c2 = Field(nl, nc);
    s.c3 = Field(nl, nc);
    return s;
  };
  st_ = mk_state();
  s1_ = mk_state();
  s2_ = mk_state();
  eL_ = mk_state();
  eR_ = mk_state();

  zb_ = Field(1, nc);
  for (int i = 0; i < nc; ++i) zb_.at(0, i) = grid_.z_bed[i];
  if (lp) {
    zb_.at(0, -2) = grid_.z_bed[nc - 2];
    zb_.at(0, -1) = grid_.z_bed[nc - 1];
    zb_.at(0, nc) = grid_.z_bed[0];
    zb_.at(0, nc + 1) = grid_.z_bed[1];
  } else {
    zb_.at(0, -2) = grid_.z_bed_ghost[0];
    zb_.at(0, -1) = grid_.z_bed_ghost[1];
    zb_.at(0, nc) = grid_.z_bed_ghost[2];
    zb_.at(0, nc + 1) = grid_.z_bed_ghost[3];
  }

  cS_ = Field(nl, nc);
  cL_ = Field(nl, nc);
  cR_ = Field(nl, nc);
  pIf_ = Field(nl + 1, nc);
  fpH_ = Field(nl, nc);
  fpQ_ = Field(nl, nc);
  fmH_ = Field(nl, nc);
  fmQ_ = Field(nl, nc);
  ifxH_.assign(static_cast<size_t>(nl) * (nc + 1), 0.0);
  ifxQ_.assign(static_cast<size_t>(nl) * (nc + 1), 0.0);
  ifxY_.assign(nc + 1, 0.0);
  gdt_.assign(static_cast<size_t>(nc) * (nl + 1), 0.0);
  sigma_.assign(nc, 0.0);
  divH_.assign(nc, 0.0);
  hrow_.assign(nc + 2 * kGhost, 0.0);
  scratch1_.assign(nc + 2 * kGhost, 0.0);
  scratch2_.assign(nc + 2 * kGhost, 0.0);
  hrec_ = Field(nl, nc);
  invHrec_ = Field(nl, nc);
  fxL_ = Field(nl, nc);
  fzDbl_ = Field(nl, nc);
  fzIf_ = Field(nl + 1, nc);
  prev_H_.assign(nc, 0.0);
  w_ = Field(nl, nc);
  light_ = Field(nl, nc);
  col_a_.assign(nl, 0.0);
  col_b_.assign(nl, 0.0);
  col_c_.assign(nl, 0.0);
  col_r_.assign(nl, 0.0);
}

Field& Solver::bio(int j) {
  switch (j) {
    case 1: return st_.c1;
    case 2: return st_.c2;
    case 3: return st_.c3;
  }
  throw std::out_of_range("bio index must be 1..3");
}

const Field& Solver::bio(int j) const { return const_cast<Solver*>(this)->bio(j); }

void Solver::set_uniform(double H0, double u0, double T0, double c10, double c20,
                         double c30) {
  st_.H.fill(H0);
  st_.u.fill(u0);
  st_.T.fill(T0);
  st_.c1.fill(c10);
  st_.c2.fill(c20);
  st_.c3.fill(c30);
}

void Solver::set_tracer_reaction(Field f) { tracer_reaction_ = std::move(f); }

const char* Solver::kernel_name() const { return kernels::half_flux_kernel_name(kernel_); }

void Solver::fill_ghosts(State& s) const {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  auto wrap = [&](Field& f, int rows) {
    for (int a = 0; a < rows; ++a) {
      f.at(a, -2) = f.at(a, nc - 2);
      f.at(a, -1) = f.at(a, nc - 1);
      f.at(a, nc) = f.at(a, 0);
      f.at(a, nc + 1) = f.at(a, 1);
    }
  };

  if (left_.kind == BoundaryCondition::Kind::periodic) {
    wrap(s.H, 1);
    for (Field* f : {&s.u, &s.T, &s.c1, &s.c2, &s.c3}) wrap(*f, nl);
    return;
  }

  auto fill_profile = [&](const BoundaryProfile& p, int g) {
    s.H.at(0, g) = p.H;
    for (int a = 0; a < nl; ++a) {
      s.u.at(a, g) = p.q[a] / (grid_.layer_fraction[a] * p.H);
      s.T.at(a, g) = p.T[a];
      s.c1.at(a, g) = p.c1[a];
      s.c2.at(a, g) = p.c2[a];
      s.c3.at(a, g) = p.c3[a];
    }
  };
  auto fill_side = [&](const BoundaryCondition& bc, int g_outer, int g_inner, int mirror) {
    if (bc.kind == BoundaryCondition::Kind::discharge) {
      fill_profile(bc.profile, g_inner);
      fill_profile(bc.profile_outer ? *bc.profile_outer : bc.profile, g_outer);
    } else {  // imposed height, zero-order extrapolated velocity and scalars
      s.H.at(0, g_outer) = s.H.at(0, g_inner) = bc.height;
      for (int a = 0; a < nl; ++a) {
        s.u.at(a, g_outer) = s.u.at(a, g_inner) = s.u.at(a, mirror);
        s.T.at(a, g_outer) = s.T.at(a, g_inner) = s.T.at(a, mirror);
        s.c1.at(a, g_outer) = s.c1.at(a, g_inner) = s.c1.at(a, mirror);
        s.c2.at(a, g_outer) = s.c2.at(a, g_inner) = s.c2.at(a, mirror);
        s.c3.at(a, g_outer) = s.c3.at(a, g_inner) = s.c3.at(a, mirror);
      }
    }
  };
  fill_side(left_, -2, -1, 0);
  fill_side(right_, nc + 1, nc, nc - 1);
}

void Solver::compute_wheel_arrays(const Field& H, double t) {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  if (!wheel_.enabled) {
    wheel_lo_ = 0;
    wheel_hi_ = -1;
    return;
  }
  const double margin = wheel_.radius + grid_.dx[0];
  wheel_lo_ = std::max(0, static_cast<int>((wheel_.x_center - margin) / grid_.dx[0]) - 1);
  wheel_hi_ = std::min(nc - 1, static_cast<int>((wheel_.x_center + margin) / grid_.dx[0]) + 1);

  // slice geometry once per x sample; cell edges are shared by neighbours
  const int span = wheel_hi_ - wheel_lo_ + 1;
  if (static_cast<int>(wsl_edge_.size()) < span + 1) {
    wsl_edge_.resize(span + 1);
    wsl_center_.resize(span);
  }
  for (int k = 0; k <= span; ++k)
    wsl_edge_[k].compute(wheel_, (wheel_lo_ + k) * grid_.dx[0], t);
  for (int k = 0; k < span; ++k) wsl_center_[k].compute(wheel_, grid_.x_center[wheel_lo_ + k], t);

  for (int i = wheel_lo_; i <= wheel_hi_; ++i) {
    const int k = i - wheel_lo_;
    const WheelSlice& sl = wsl_edge_[k];
    const WheelSlice& sc = wsl_center_[k];
    const WheelSlice& sr = wsl_edge_[k + 1];
    const double Hi = H.at(0, i);
    const double zb = zb_.at(0, i);
    const double eta = zb + Hi;
    auto simpson = [](double l, double c, double r) { return (l + 4.0 * c + r) / 6.0; };
    for (int a = 0; a < nl; ++a) {
      const double zlo = zb + grid_.frac_cum[a] * Hi;
      const double zhi = zb + grid_.frac_cum[a + 1] * Hi;
      fxL_.at(a, i) = simpson(sl.force_x(zlo, zhi), sc.force_x(zlo, zhi), sr.force_x(zlo, zhi));
      fzDbl_.at(a, i) = simpson(sl.fz_double(zlo, zhi, eta), sc.fz_double(zlo, zhi, eta),
                                sr.fz_double(zlo, zhi, eta));
      fzIf_.at(a, i) = simpson(sl.fz_integral(zlo, eta), sc.fz_integral(zlo, eta),
                               sr.fz_integral(zlo, eta));
    }
    fzIf_.at(nl, i) = 0.0;  // integral from eta to eta
  }
}

void Solver::compute_speed(const Field& H, const Field& T, Field& c_out, Field* p_iface_out,
                           bool with_wheel) {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  const double inv_rho0 = 1.0 / phys_.rho0;
  const double g = phys_.g;
  const int span = nc + 2;  // cells -1 .. nc
  double* above = scratch1_.data();  // accumulated weight of the layers above
  std::fill(above, above + span, 0.0);
  const double* Hr = H.row(0) - 1;
  if (p_iface_out) std::fill(p_iface_out->row(nl) - 1, p_iface_out->row(nl) - 1 + span, 0.0);

  for (int a = nl - 1; a >= 0; --a) {
    const double la = grid_.layer_fraction[a];
    const double* __restrict__ Tr = T.row(a) - 1;
    double* __restrict__ cr = c_out.row(a) - 1;
    double* __restrict__ pir = p_iface_out ? p_iface_out->row(a) - 1 : nullptr;
    for (int j = 0; j < span; ++j) {
      const double h = la * std::max(Hr[j], 0.0);
      const double rho = density_of_tracer(phys_, Tr[j]);
      const double w = g * rho * h;
      const double pl = 0.5 * w + above[j];
      cr[j] = pl;  // force correction and sqrt applied below
      above[j] += w;
      if (pir) pir[j] = above[j];
    }
    if (with_wheel && wheel_.enabled) {
      for (int i = wheel_lo_; i <= wheel_hi_; ++i) {
        const double h = la * std::max(Hr[i + 1], 0.0);
        if (h > scheme_.dry_h) cr[i + 1] -= fzDbl_.at(a, i) / h;
        if (pir) pir[i + 1] -= fzIf_.at(a, i);
      }
    }
    double clamped = 0.0;
    for (int j = 0; j < span; ++j) {
      const double pl = cr[j];
      clamped += pl < 0.0 ? 1.0 : 0.0;
      cr[j] = std::sqrt(std::max(pl, 0.0) * inv_rho0);
    }
    pressure_clamps_ += static_cast<long>(clamped);
  }
}

void Solver::reconstruct(const State& s, State& eL, State& eR) const {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  const bool lim = scheme_.limiter;
  auto edges = [&](const Field& X, Field& L, Field& R, int rows) {
    for (int a = 0; a < rows; ++a) {
      for (int i = -1; i <= nc; ++i) {
        const double dm = X.at(a, i) - X.at(a, i - 1);
        const double dp = X.at(a, i + 1) - X.at(a, i);
        const double slope = lim ? minmod(dm, dp) : 0.5 * (dm + dp);
        L.at(a, i) = X.at(a, i) + 0.5 * slope;
        R.at(a, i) = X.at(a, i) - 0.5 * slope;
      }
    }
  };
  edges(s.H, eL.H, eR.H, 1);
  edges(s.u, eL.u, eR.u, nl);
  edges(s.T, eL.T, eR.T, nl);
  edges(s.c1, eL.c1, eR.c1, nl);
  edges(s.c2, eL.c2, eR.c2, nl);
  edges(s.c3, eL.c3, eR.c3, nl);
}

// One explicit kinetic transport stage: in -> out over dt at time t.
void Solver::stage(State& in, double dt, double t, State& out) {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  const double dry = scheme_.dry_h;
  const bool second = scheme_.order == 2;

  if (speed_fresh_ && &in == &st_) {
    speed_fresh_ = false;  // arrays already computed by compute_dt
  } else {
    fill_ghosts(in);
    compute_wheel_arrays(in.H, t);
    compute_speed(in.H, in.T, cS_, &pIf_, true);
  }
  const State* SL = &in;
  const State* SR = &in;
  const Field* cl = &cS_;
  const Field* cr = &cS_;
  if (second) {
    reconstruct(in, eL_, eR_);
    compute_speed(eL_.H, eL_.T, cL_, nullptr, true);
    compute_speed(eR_.H, eR_.T, cR_, nullptr, true);
    SL = &eL_;
    SR = &eR_;
    cl = &cL_;
    cr = &cR_;
  }

  // Half fluxes per layer row over cells [-1, nc]; F+ from the left-edge
  // (own-cell) state, F- from the right-edge state.
  const int span = nc + 2;
  for (int a = 0; a < nl; ++a) {
    const double la = grid_.layer_fraction[a];
    double* hrow = hrow_.data();
    const double* HL = SL->H.row(0) - 1;
    for (int j = 0; j < span; ++j) hrow[j] = la * std::max(HL[j], 0.0);
    kernel_(span, hrow, SL->u.row(a) - 1, cl->row(a) - 1, fpH_.row(a) - 1, fpQ_.row(a) - 1,
            fmH_.row(a) - 1, fmQ_.row(a) - 1);
    if (second) {
      // recompute F- from the right-edge state into the fm rows
      const double* HR = SR->H.row(0) - 1;
      for (int j = 0; j < span; ++j) hrow[j] = la * std::max(HR[j], 0.0);
      kernel_(span, hrow, SR->u.row(a) - 1, cr->row(a) - 1, scratch1_.data(),
              scratch2_.data(), fmH_.row(a) - 1, fmQ_.row(a) - 1);
    }
  }

  // Interface fluxes: k = 0..nc separates cells k-1 | k.
  for (int a = 0; a < nl; ++a) {
    double* fh = ifxH_.data() + static_cast<size_t>(a) * (nc + 1);
    double* fq = ifxQ_.data() + static_cast<size_t>(a) * (nc + 1);
    const double* fph = fpH_.row(a);
    const double* fpq = fpQ_.row(a);
    const double* fmh = fmH_.row(a);
    const double* fmq = fmQ_.row(a);
    for (int k = 0; k <= nc; ++k) {
      fh[k] = fph[k - 1] + fmh[k];
      fq[k] = fpq[k - 1] + fmq[k];
    }
  }

  // Water height update and exchange-term recursion, row by row so the
  // loops stream over cells.
  const double* Hin = in.H.row(0);
  double* Hout = out.H.row(0);
  for (int i = 0; i < nc; ++i) sigma_[i] = dt / grid_.dx[i];
  const double* sig = sigma_.data();

  std::fill(divH_.begin(), divH_.end(), 0.0);
  for (int a = 0; a < nl; ++a) {
    const double* fh = ifxH_.data() + static_cast<size_t>(a) * (nc + 1);
    for (int i = 0; i < nc; ++i) divH_[i] += fh[i + 1] - fh[i];
  }
  for (int i = 0; i < nc; ++i) {
    double Hn = Hin[i] - sig[i] * divH_[i];
    if (Hn < 0.0) {
      if (Hn < -1e-10 * std::max(1.0, Hin[i]))
        throw SolverError("negative water height after transport", steps_, i);
      Hn = 0.0;
    }
    Hout[i] = Hn;
  }

  std::fill(gdt_row(0), gdt_row(0) + nc, 0.0);
  for (int a = 0; a < nl; ++a) {
    const double* fh = ifxH_.data() + static_cast<size_t>(a) * (nc + 1);
    const double la = grid_.layer_fraction[a];
    const double* __restrict__ gl = gdt_row(a);
    double* __restrict__ gu = gdt_row(a + 1);
    double* __restrict__ hr = hrec_.row(a);
    double* __restrict__ ir = invHrec_.row(a);
    for (int i = 0; i < nc; ++i) {
      const double flux = sig[i] * (fh[i + 1] - fh[i]);
      gu[i] = gl[i] + (la * (Hout[i] - Hin[i]) + flux);
      hr[i] = std::max(la * Hin[i] - flux + (gu[i] - gl[i]), 0.0);
    }
    for (int i = 0; i < nc; ++i) ir[i] = hr[i] > dry ? 1.0 / hr[i] : 0.0;
  }
  std::fill(gdt_row(nl), gdt_row(nl) + nc, 0.0);  // exact surface condition

  // Momentum.
  const double inv_rho0 = 1.0 / phys_.rho0;
  const double* zb = zb_.row(0);
  double* __restrict__ invH = divH_.data();  // reuse: 1/H_out per cell
  for (int i = 0; i < nc; ++i) invH[i] = Hout[i] > 0.0 ? 1.0 / Hout[i] : 0.0;
  for (int a = 0; a < nl; ++a) {
    const double* fq = ifxQ_.data() + static_cast<size_t>(a) * (nc + 1);
    const double la = grid_.layer_fraction[a];
    const double inv_la = 1.0 / la;
    const double sa0 = grid_.frac_cum[a], sa1 = grid_.frac_cum[a + 1];
    const double* __restrict__ u0r = in.u.row(a);
    const double* __restrict__ uup = a < nl - 1 ? in.u.row(a + 1) : nullptr;
    const double* __restrict__ udn = a > 0 ? in.u.row(a - 1) : nullptr;
    const double* __restrict__ gl = gdt_row(a);
    const double* __restrict__ gu = gdt_row(a + 1);
    const double* __restrict__ pU = pIf_.row(a + 1);
    const double* __restrict__ pL = pIf_.row(a);
    double* __restrict__ uo = out.u.row(a);
    for (int i = 0; i < nc; ++i) {
      // vertical upwind: G > 0 carries water downward, donor is the upper
      // layer. The second-order scheme takes the centered interface
      // velocity instead; upwinding here would cap the observed order.
      double u_top = 0.0, u_bot = 0.0;
      if (uup)
        u_top = second ? 0.5 * (u0r[i] + uup[i]) : (gu[i] >= 0.0 ? uup[i] : u0r[i]);
      if (udn)
        u_bot = second ? 0.5 * (udn[i] + u0r[i]) : (gl[i] >= 0.0 ? u0r[i] : udn[i]);
      // interface slopes (centered)
      const double inv2dx = 0.5 / grid_.dx[i];
      const double zt_e = zb[i + 1] + sa1 * Hin[i + 1];
      const double zt_w = zb[i - 1] + sa1 * Hin[i - 1];
      const double zb_e = zb[i + 1] + sa0 * Hin[i + 1];
      const double zb_w = zb[i - 1] + sa0 * Hin[i - 1];
      const double slope_term =
          pU[i] * (zt_e - zt_w) * inv2dx - pL[i] * (zb_e - zb_w) * inv2dx;

      // incremental form: an unperturbed cell stays bit-exact
      double R = -sig[i] * (fq[i + 1] - fq[i]);
      R += gu[i] * u_top - gl[i] * u_bot;
      R += dt * inv_rho0 * slope_term;

      const double h_old = la * Hin[i];
      const double hn = la * Hout[i];
      uo[i] = hn > dry ? u0r[i] + (R - u0r[i] * (hn - h_old)) * inv_la * invH[i] : 0.0;
    }
    if (wheel_.enabled) {
      const double* fx = fxL_.row(a);
      for (int i = wheel_lo_; i <= wheel_hi_; ++i) {
        const double hn = la * Hout[i];
        if (hn > dry) uo[i] += dt * inv_rho0 * fx[i] / hn;
      }
    }
  }

  // Passive fields: tracer and the three biological concentrations,
  // upwinded horizontally by the sign of the layer mass flux and
  // vertically by the sign of the exchange term.
  const Field* srcs[4] = {&in.T, &in.c1, &in.c2, &in.c3};
  const Field* edl[4] = {&SL->T, &SL->c1, &SL->c2, &SL->c3};
  const Field* edr[4] = {&SR->T, &SR->c1, &SR->c2, &SR->c3};
  Field* dsts[4] = {&out.T, &out.c1, &out.c2, &out.c3};
  for (int f = 0; f < 4; ++f) {
    const Field& Y = *srcs[f];
    const Field& YL = *edl[f];
    const Field& YR = *edr[f];
    Field& O = *dsts[f];
    for (int a = 0; a < nl; ++a) {
      const double* fh = ifxH_.data() + static_cast<size_t>(a) * (nc + 1);
      const double* yl = YL.row(a);
      const double* yr = YR.row(a);
      double* fy = ifxY_.data();
      for (int k = 0; k <= nc; ++k)
        fy[k] = fh[k] * (fh[k] >= 0.0 ? yl[k - 1] : yr[k]);
      const double la = grid_.layer_fraction[a];
      const double* __restrict__ y0r = Y.row(a);
      const double* __restrict__ yu = a < nl - 1 ? Y.row(a + 1) : nullptr;
      const double* __restrict__ yd = a > 0 ? Y.row(a - 1) : nullptr;
      const double* __restrict__ gl = gdt_row(a);
      const double* __restrict__ gu = gdt_row(a + 1);
      const double* __restrict__ hr = hrec_.row(a);
      const double* __restrict__ ir = invHrec_.row(a);
      double* __restrict__ yo = O.row(a);
      for (int i = 0; i < nc; ++i) {
        const double y_top = yu ? (gu[i] >= 0.0 ? yu[i] : y0r[i]) : 0.0;
        const double y_bot = yd ? (gl[i] >= 0.0 ? y0r[i] : yd[i]) : 0.0;
        const double R = -sig[i] * (fy[i + 1] - fy[i]) + gu[i] * y_top - gl[i] * y_bot;
        const double h_old = la * Hin[i];
        yo[i] = hr[i] > dry ? y0r[i] + (R - y0r[i] * (hr[i] - h_old)) * ir[i] : y0r[i];
      }
    }
  }
}

double Solver::compute_dt() const {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  // kinetic speeds of the current state; the arrays stay valid for the
  // first transport stage of the following step
  auto* self = const_cast<Solver*>(this);
  self->fill_ghosts(self->st_);
  self->compute_wheel_arrays(st_.H, t_);
  self->compute_speed(st_.H, st_.T, self->cS_, &self->pIf_, true);
  self->speed_fresh_ = true;
  double max_ratio = 0.0;  // max wave speed over dx among wet layers
  const double* Hr = st_.H.row(0);
  for (int a = 0; a < nl; ++a) {
    const double la = grid_.layer_fraction[a];
    const double* ur = st_.u.row(a);
    const double* cr = cS_.row(a);
    for (int i = 0; i < nc; ++i) {
      const double wet = la * Hr[i] > scheme_.dry_h ? 1.0 : 0.0;
      const double speed = wet * (std::abs(ur[i]) + kernels::kSqrt3 * cr[i]) / grid_.dx[i];
      max_ratio = std::max(max_ratio, speed);
    }
  }
  if (max_ratio <= 1e-12) return scheme_.dt_max;
  return std::min(scheme_.dt_max, scheme_.effective_cfl() / max_ratio);
}

double Solver::step(std::optional<double> dt_cap) {
  double dt = compute_dt();
  if (dt_cap && *dt_cap > 0.0) dt = std::min(dt, *dt_cap);
  step_core(dt);
  return dt;
}

void Solver::step_core(double dt) {
  for (int i = 0; i < grid_.n_cells; ++i) prev_H_[i] = st_.H.at(0, i);

  if (scheme_.order == 1) {
    stage(st_, dt, t_, s1_);
    std::swap(st_, s1_);
  } else {
    stage(st_, dt, t_, s1_);
    stage(s1_, dt, t_ + dt, s2_);
    // Heun average in conservative variables
    const int nc = grid_.n_cells, nl = grid_.n_layers;
    for (int i = 0; i < nc; ++i) {
      const double H0 = st_.H.at(0, i), H2 = s2_.H.at(0, i);
      const double Hn = 0.5 * (H0 + H2);
      for (int a = 0; a < nl; ++a) {
        const double wsum = H0 + H2;
        if (grid_.layer_fraction[a] * Hn > scheme_.dry_h && wsum > 0.0) {
          // conservative average in incremental form (exact when both
          // stages agree)
          auto avg = [&](double y0, double y2) { return y0 + H2 * (y2 - y0) / wsum; };
          st_.u.at(a, i) = avg(st_.u.at(a, i), s2_.u.at(a, i));
          st_.T.at(a, i) = avg(st_.T.at(a, i), s2_.T.at(a, i));
          st_.c1.at(a, i) = avg(st_.c1.at(a, i), s2_.c1.at(a, i));
          st_.c2.at(a, i) = avg(st_.c2.at(a, i), s2_.c2.at(a, i));
          st_.c3.at(a, i) = avg(st_.c3.at(a, i), s2_.c3.at(a, i));
        } else {
          st_.u.at(a, i) = 0.0;
        }
      }
      st_.H.at(0, i) = Hn;
    }
  }

  diffusion_friction(st_, dt);

  t_ += dt;
  dt_last_ = dt;
  ++steps_;
  have_prev_ = true;
  bio_accum_ += dt;
  if (steps_ % scheme_.bio_stride == 0) {
    if (scheme_.bio_reactions || tracer_reaction_) apply_reactions(st_, bio_accum_, t_);
    bio_accum_ = 0.0;
  }
}

void Solver::diffusion_friction(State& s, double dt) {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  const double mu = phys_.mu, kappa = phys_.kappa;

  auto vertical_solve = [&](Field& Y, double coeff, bool friction) {
    if (coeff <= 0.0 && !friction) return;
    for (int i = 0; i < nc; ++i) {
      const double Hi = s.H.at(0, i);
      if (Hi <= scheme_.dry_h) continue;
      if (nl == 1) {
        const double h0 = Hi;
        if (friction && kappa > 0.0) Y.at(0, i) = h0 * Y.at(0, i) / (h0 + dt * kappa);
        continue;
      }
      for (int a = 0; a < nl; ++a) {
        const double h = grid_.layer_fraction[a] * Hi;
        const double h_up = a < nl - 1
                                ? 0.5 * (h + grid_.layer_fraction[a + 1] * Hi)
                                : 0.0;
        const double h_dn = a > 0 ? 0.5 * (h + grid_.layer_fraction[a - 1] * Hi) : 0.0;
        const double cu = (a < nl - 1 && coeff > 0.0) ? dt * coeff / h_up : 0.0;
        const double cd = (a > 0 && coeff > 0.0) ? dt * coeff / h_dn : 0.0;
        col_a_[a] = -cd;
        col_c_[a] = -cu;
        col_b_[a] = h + cu + cd + ((friction && a == 0) ? dt * kappa : 0.0);
        col_r_[a] = h * Y.at(a, i);
      }
      // Thomas sweep
      for (int a = 1; a < nl; ++a) {
        const double m = col_a_[a] / col_b_[a - 1];
        col_b_[a] -= m * col_c_[a - 1];
        col_r_[a] -= m * col_r_[a - 1];
      }
      double prev = col_r_[nl - 1] / col_b_[nl - 1];
      Y.at(nl - 1, i) = prev;
      for (int a = nl - 2; a >= 0; --a) {
        prev = (col_r_[a] - col_c_[a] * prev) / col_b_[a];
        Y.at(a, i) = prev;
      }
    }
  };

  vertical_solve(s.u, mu, kappa > 0.0);
  if (phys_.mu_T > 0.0) {
    vertical_solve(s.T, phys_.mu_T, false);
    horizontal_diffusion(s, s.T, phys_.mu_T, dt);
  }
  if (phys_.mu_C > 0.0) {
    for (Field* f : {&s.c1, &s.c2, &s.c3}) {
      vertical_solve(*f, phys_.mu_C, false);
      horizontal_diffusion(s, *f, phys_.mu_C, dt);
    }
  }
}

void Solver::horizontal_diffusion(State& s, Field& Y, double mu, double dt) {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  const double dx = grid_.dx[0];
  const int nsub = std::max(1, static_cast<int>(std::ceil(dt * mu / (0.4 * dx * dx))));
  const double dts = dt / nsub;
  const bool periodic = left_.kind == BoundaryCondition::Kind::periodic;
  for (int sub = 0; sub < nsub; ++sub) {
    fill_ghosts(s);
    for (int a = 0; a < nl; ++a) {
      const double la = grid_.layer_fraction[a];
      double* fy = ifxY_.data();
      for (int k = 0; k <= nc; ++k) {
        if (!periodic && (k == 0 || k == nc)) {
          fy[k] = 0.0;
          continue;
        }
        const double hl = la * s.H.at(0, k - 1), hr = la * s.H.at(0, k);
        fy[k] = mu * 0.5 * (hl + hr) * (Y.at(a, k) - Y.at(a, k - 1)) / dx;
      }
      for (int i = 0; i < nc; ++i) {
        const double h = la * s.H.at(0, i);
        if (h <= scheme_.dry_h) continue;
        Y.at(a, i) += dts / dx * (fy[i + 1] - fy[i]) / h;
      }
    }
  }
}

void Solver::apply_reactions(State& s, double dt_bio, double t_now) {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  const double dt_days = dt_bio / kDaySeconds;
  const double I0 = surface_light(bio_, t_now / kDaySeconds + bio_.time_offset_days);

  for (int i = 0; i < nc; ++i) {
    const double Hi = s.H.at(0, i);
    if (scheme_.bio_reactions) {
      // light at layer midpoints, accumulated downward from the surface
      double psi = 0.0;
      for (int a = nl - 1; a >= 0; --a) {
        const double h = grid_.layer_fraction[a] * std::max(Hi, 0.0);
        const double k = bio_.atten_a * bio_.gamma_star * s.c2.at(a, i) + bio_.atten_b;
        light_.at(a, i) = I0 * std::exp(-(psi + 0.5 * k * h));
        psi += k * h;
      }
      for (int a = 0; a < nl; ++a) {
        const auto r = reaction_rates(bio_, s.c1.at(a, i), s.c2.at(a, i), s.c3.at(a, i),
                                      light_.at(a, i));
        s.c1.at(a, i) = std::max(s.c1.at(a, i) + dt_days * r[0], 0.0);
        s.c2.at(a, i) = std::max(s.c2.at(a, i) + dt_days * r[1], 0.0);
        s.c3.at(a, i) = std::max(s.c3.at(a, i) + dt_days * r[2], 0.0);
      }
    }
    if (tracer_reaction_) {
      for (int a = 0; a < nl; ++a)
        s.T.at(a, i) *= 1.0 + dt_bio * tracer_reaction_->at(a, i);
    }
  }
}

void Solver::refresh_diagnostics() {
  const int nc = grid_.n_cells, nl = grid_.n_layers;
  // light for the current state (also kept fresh by apply_reactions)
  const double I0 = surface_light(bio_, t_ / kDaySeconds + bio_.time_offset_days);
  for (int i = 0; i < nc; ++i) {
    double psi = 0.0;
    const double Hi = std::max(st_.H.at(0, i), 0.0);
    for (int a = nl - 1; a >= 0; --a) {
      const double h = grid_.layer_fraction[a] * Hi;
      const double k = bio_.atten_a * bio_.gamma_star * st_.c2.at(a, i) + bio_.atten_b;
      light_.at(a, i) = I0 * std::exp(-(psi + 0.5 * k * h));
      psi += k * h;
    }
  }

  if (!have_prev_ || dt_last_ <= 0.0) {
    w_.fill(0.0);
    return;
  }
  fill_ghosts(st_);
  auto zz = [&](int a, int i) {
    const double zlo = zb_.at(0, i) + grid_.frac_cum[a] * st_.H.at(0, i);
    const double zhi = zb_.at(0, i) + grid_.frac_cum[a + 1] * st_.H.at(0, i);
    return 0.5 * (zhi * zhi - zlo * zlo);
  };
  for (int i = 0; i < nc; ++i) {
    for (int a = 0; a < nl; ++a) {
      const double h = grid_.layer_fraction[a] * st_.H.at(0, i);
      if (h <= scheme_.dry_h) {
        w_.at(a, i) = 0.0;
        continue;
      }
      const double zlo_p = zb_.at(0, i) + grid_.frac_cum[a] * prev_H_[i];
      const double zhi_p = zb_.at(0, i) + grid_.frac_cum[a + 1] * prev_H_[i];
      const double zz_prev = 0.5 * (zhi_p * zhi_p - zlo_p * zlo_p);
      const double dt_term = (zz(a, i) - zz_prev) / dt_last_;
      const double dx_term = (zz(a, i + 1) * st_.u.at(a, i + 1) -
                              zz(a, i - 1) * st_.u.at(a, i - 1)) /
                             (2.0 * grid_.dx[i]);
      const double ztop = zb_.at(0, i) + grid_.frac_cum[a + 1] * st_.H.at(0, i);
      const double zbot = zb_.at(0, i) + grid_.frac_cum[a] * st_.H.at(0, i);
      const double Gtop = gdt_row(a + 1)[i] / dt_last_;
      const double Gbot = gdt_row(a)[i] / dt_last_;
      w_.at(a, i) = (dt_term + dx_term - ztop * Gtop + zbot * Gbot) / h;
    }
  }
}

double Solver::total_volume() const {
  KahanSum k;
  for (int i = 0; i < grid_.n_cells; ++i) k.add(st_.H.at(0, i) * grid_.dx[i]);
  return k.s;
}

double Solver::total_tracer_mass() const {
  KahanSum k;
  for (int a = 0; a < grid_.n_layers; ++a)
    for (int i = 0; i < grid_.n_cells; ++i)
      k.add(grid_.layer_fraction[a] * st_.H.at(0, i) * st_.T.at(a, i) * grid_.dx[i]);
  return k.s;
}

double Solver::total_bio_mass(int j) const {
  const Field& f = bio(j);
  KahanSum k;
  for (int a = 0; a < grid_.n_layers; ++a)
    for (int i = 0; i < grid_.n_cells; ++i)
      k.add(grid_.layer_fraction[a] * st_.H.at(0, i) * f.at(a, i) * grid_.dx[i]);
  return k.s;
}

std::pair<double, double> Solver::tracer_range() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int a = 0; a < grid_.n_layers; ++a)
    for (int i = 0; i < grid_.n_cells; ++i)
      if (st_.H.at(0, i) > scheme_.dry_h) {
        lo = std::min(lo, st_.T.at(a, i));
        hi = std::max(hi, st_.T.at(a, i));
      }
  return {lo, hi};
}

std::pair<double, double> Solver::bio_range(int j) const {
  const Field& f = bio(j);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int a = 0; a < grid_.n_layers; ++a)
    for (int i = 0; i < grid_.n_cells; ++i)
      if (st_.H.at(0, i) > scheme_.dry_h) {
        lo = std::min(lo, f.at(a, i));
        hi = std::max(hi, f.at(a, i));
      }
  return {lo, hi};
}

double Solver::min_height() const {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_.n_cells; ++i) lo = std::min(lo, st_.H.at(0, i));
  return lo;
}

}  // namespace raceway
