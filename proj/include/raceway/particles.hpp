#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "raceway/grid.hpp"
#include "raceway/snapshot.hpp"

namespace raceway {

/// Lagrangian particles with their recorded perceived-light traces.
/// Positions stay clamped inside the wetted column; there is no stochastic
/// motion term.
struct ParticleSet {
  std::vector<double> x, z;
  std::vector<double> sample_time;          // shared by all particles
  std::vector<double> sample_I0;            // incident light at each sample
  std::vector<std::vector<double>> light;   // per particle, per sample
  std::vector<std::vector<double>> trace_x; // positions at sample times
  std::vector<std::vector<double>> trace_z;
  long clamp_count = 0;  // velocity queries that fell outside the domain

  int count() const { return static_cast<int>(x.size()); }
};

/// n particles equally spaced over the water column at horizontal position
/// x_seed. A nonzero seed adds deterministic stratified jitter in depth.
ParticleSet seed_particles(const GridSpec& grid, const SnapshotRecord& snap, int n,
                           double x_seed, uint64_t seed = 0);

/// Velocity at (x, z): linear in x between cell centers, piecewise constant
/// per layer in z. Out-of-domain queries clamp to the boundary and bump
/// clamp_count.
std::pair<double, double> sample_velocity(const GridSpec& grid, const SnapshotRecord& snap,
                                          double x, double z, bool periodic_x,
                                          long* clamp_count = nullptr);

/// Advances particles from snapA.time to snapB.time with explicit-midpoint
/// steps of at most dt_sub, interpolating the two snapshots linearly in
/// time, then records one (position, perceived light) sample at snapB.
void advect_particles(ParticleSet& ps, const GridSpec& grid, const SnapshotRecord& snapA,
                      const SnapshotRecord& snapB, double dt_sub, bool periodic_x);

/// Records the current positions and per-layer light without moving
/// (used for the seeding instant).
void record_sample(ParticleSet& ps, const GridSpec& grid, const SnapshotRecord& snap);

/// Per-particle enlightenment statistics over daylight samples
/// (I0 > 0): fraction of time above threshold_fraction of the incident
/// light, low-to-high switch counts, and a histogram in 5% classes.
struct ExposureStats {
  bool defined = false;  // false when no daylight samples exist
  std::vector<double> fraction;  // per particle
  std::vector<int> switches;
  std::array<int, 20> histogram{};  // class k: fraction in [5k%, 5(k+1)%)
  double mean_fraction = 0.0;
  int never_high = 0;
};
ExposureStats light_exposure_stats(const ParticleSet& ps, double threshold_fraction);

}  // namespace raceway
