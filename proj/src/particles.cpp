#include "raceway/particles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace raceway {

namespace {

struct CellLayer {
  int cell;
  int layer;
};

int layer_of(const GridSpec& grid, double rel) {
  // rel = (z - z_b)/H clamped to [0, 1)
  const int N = grid.n_layers;
  rel = std::clamp(rel, 0.0, std::nextafter(1.0, 0.0));
  // layer fractions are few; linear scan beats binary search at these sizes
  for (int a = 0; a < N; ++a)
    if (rel < grid.frac_cum[a + 1]) return a;
  return N - 1;
}

CellLayer locate(const GridSpec& grid, const SnapshotRecord& snap, double x, double z,
                 bool periodic_x) {
  const double L = grid.domain_length;
  if (periodic_x) {
    x = std::fmod(x, L);
    if (x < 0.0) x += L;
  } else {
    x = std::clamp(x, 0.0, std::nextafter(L, 0.0));
  }
  int i = static_cast<int>(x / grid.dx[0]);
  i = std::clamp(i, 0, grid.n_cells - 1);
  const double H = snap.H[i];
  const double rel = H > 0.0 ? (z - grid.z_bed[i]) / H : 0.0;
  return {i, layer_of(grid, rel)};
}

}  // namespace

ParticleSet seed_particles(const GridSpec& grid, const SnapshotRecord& snap, int n,
                           double x_seed, uint64_t seed) {
  ParticleSet ps;
  ps.x.resize(n);
  ps.z.resize(n);
  ps.light.resize(n);
  ps.trace_x.resize(n);
  ps.trace_z.resize(n);
  const int i = std::clamp(static_cast<int>(x_seed / grid.dx[0]), 0, grid.n_cells - 1);
  const double zb = grid.z_bed[i], H = snap.H[i];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jit(-0.45, 0.45);
  for (int k = 0; k < n; ++k) {
    double frac = (k + 0.5) / n;
    if (seed != 0) frac = std::clamp(frac + jit(rng) / n, 0.0, 1.0);
    ps.x[k] = x_seed;
    ps.z[k] = zb + frac * H;
  }
  return ps;
}

std::pair<double, double> sample_velocity(const GridSpec& grid, const SnapshotRecord& snap,
                                          double x, double z, bool periodic_x,
                                          long* clamp_count) {
  const double L = grid.domain_length;
  const int nc = grid.n_cells;
  if (periodic_x) {
    x = std::fmod(x, L);
    if (x < 0.0) x += L;
  } else if (x < 0.0 || x > L) {
    x = std::clamp(x, 0.0, L);
    if (clamp_count) ++*clamp_count;
  }

  // neighbouring cell centers around x
  double pos = x / grid.dx[0] - 0.5;
  int i0;
  double fr;
  if (periodic_x) {
    const double wrapped = pos - std::floor(pos / nc) * nc;
    i0 = static_cast<int>(std::floor(wrapped));
    fr = wrapped - i0;
    i0 = std::clamp(i0, 0, nc - 1);
  } else {
    i0 = static_cast<int>(std::floor(pos));
    fr = pos - i0;
    if (i0 < 0) {
      i0 = 0;
      fr = 0.0;
    }
    if (i0 > nc - 2) {
      i0 = nc - 2;
      fr = 1.0;
    }
  }
  const int i1 = periodic_x ? (i0 + 1) % nc : i0 + 1;

  // one clamp count per query, judged against the nearer column
  {
    const int near = fr < 0.5 ? i0 : i1;
    const double H = snap.H[near];
    const double rel = H > 0.0 ? (z - grid.z_bed[near]) / H : 0.0;
    if ((rel < 0.0 || rel > 1.0) && clamp_count) ++*clamp_count;
  }
  auto column_value = [&](int i) -> std::pair<double, double> {
    const double H = snap.H[i];
    if (H <= 0.0) return {0.0, 0.0};
    const double rel = std::clamp((z - grid.z_bed[i]) / H, 0.0, 1.0);
    const int a = layer_of(grid, rel);
    return {snap.u.at(a, i), snap.w.at(a, i)};
  };
  const auto [u0, w0] = column_value(i0);
  const auto [u1, w1] = column_value(i1);
  return {(1.0 - fr) * u0 + fr * u1, (1.0 - fr) * w0 + fr * w1};
}

void record_sample(ParticleSet& ps, const GridSpec& grid, const SnapshotRecord& snap) {
  ps.sample_time.push_back(snap.time);
  ps.sample_I0.push_back(snap.I0);
  for (int k = 0; k < ps.count(); ++k) {
    const auto cl = locate(grid, snap, ps.x[k], ps.z[k], true);
    ps.light[k].push_back(snap.light.at(cl.layer, cl.cell));
    ps.trace_x[k].push_back(ps.x[k]);
    ps.trace_z[k].push_back(ps.z[k]);
  }
}

void advect_particles(ParticleSet& ps, const GridSpec& grid, const SnapshotRecord& snapA,
                      const SnapshotRecord& snapB, double dt_sub, bool periodic_x) {
  const double t0 = snapA.time, t1 = snapB.time;
  const double span = t1 - t0;
  const int nsub = std::max(1, static_cast<int>(std::ceil(span / dt_sub)));
  const double h = span / nsub;
  const double L = grid.domain_length;

  auto vel = [&](double x, double z, double t) -> std::pair<double, double> {
    const double th = span > 0.0 ? (t - t0) / span : 0.0;
    const auto [uA, wA] = sample_velocity(grid, snapA, x, z, periodic_x, &ps.clamp_count);
    const auto [uB, wB] = sample_velocity(grid, snapB, x, z, periodic_x, &ps.clamp_count);
    return {(1.0 - th) * uA + th * uB, (1.0 - th) * wA + th * wB};
  };

  auto clamp_into_column = [&](double& x, double& z, const SnapshotRecord& snap) {
    if (periodic_x) {
      x = std::fmod(x, L);
      if (x < 0.0) x += L;
    } else {
      x = std::clamp(x, 0.0, std::nextafter(L, 0.0));
    }
    const int i = std::clamp(static_cast<int>(x / grid.dx[0]), 0, grid.n_cells - 1);
    const double zb = grid.z_bed[i];
    z = std::clamp(z, zb, zb + std::max(snap.H[i], 0.0));
  };

  for (int k = 0; k < ps.count(); ++k) {
    double x = ps.x[k], z = ps.z[k];
    for (int s = 0; s < nsub; ++s) {
      const double t = t0 + s * h;
      const auto [u1, w1] = vel(x, z, t);
      double xm = x + 0.5 * h * u1, zm = z + 0.5 * h * w1;
      clamp_into_column(xm, zm, snapA);
      const auto [u2, w2] = vel(xm, zm, t + 0.5 * h);
      x += h * u2;
      z += h * w2;
      clamp_into_column(x, z, snapB);
    }
    ps.x[k] = x;
    ps.z[k] = z;
  }
  record_sample(ps, grid, snapB);
}

ExposureStats light_exposure_stats(const ParticleSet& ps, double threshold_fraction) {
  ExposureStats st;
  const int n = ps.count();
  st.fraction.assign(n, 0.0);
  st.switches.assign(n, 0);
  bool any_daylight = false;
  for (size_t s = 0; s < ps.sample_time.size(); ++s)
    if (ps.sample_I0[s] > 0.0) any_daylight = true;
  if (!any_daylight || n == 0) return st;  // statistics undefined
  st.defined = true;

  for (int k = 0; k < n; ++k) {
    long daylight = 0, high = 0;
    int prev_state = -1;  // 0 low, 1 high
    for (size_t s = 0; s < ps.sample_time.size(); ++s) {
      if (!(ps.sample_I0[s] > 0.0)) continue;
      ++daylight;
      const int state = ps.light[k][s] > threshold_fraction * ps.sample_I0[s] ? 1 : 0;
      high += state;
      if (prev_state == 0 && state == 1) ++st.switches[k];
      prev_state = state;
    }
    st.fraction[k] = daylight > 0 ? static_cast<double>(high) / daylight : 0.0;
    const int bin = std::min(19, static_cast<int>(st.fraction[k] * 20.0));
    ++st.histogram[bin];
    if (high == 0) ++st.never_high;
    st.mean_fraction += st.fraction[k];
  }
  st.mean_fraction /= n;
  return st;
}

}  // namespace raceway
