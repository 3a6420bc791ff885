#pragma once

#include <fstream>
#include <string>

#include "raceway/grid.hpp"
#include "raceway/particles.hpp"
#include "raceway/snapshot.hpp"
#include "raceway/solver.hpp"

namespace raceway {

/// snapshot_<zero-padded seconds>.csv; lexicographic order = time order.
std::string snapshot_filename(double time);

/// One row per (cell, layer), full double precision (round-trippable).
/// Header: time,cell,layer,x,z_mid,H,u,w,T,rho,c1,c2,c3,I
void write_snapshot_csv(const std::string& path, const GridSpec& grid,
                        const SnapshotRecord& snap);
SnapshotRecord read_snapshot_csv(const std::string& path, const GridSpec& grid);

/// Domain-averaged time series of a run.
/// Header: time,volume,H_mean,u_mean,speed_mean,T_mean,c1_mean,c2_mean,c3_mean,q_bulk
class TimeseriesWriter {
 public:
  explicit TimeseriesWriter(const std::string& path);
  void row(const Solver& solver);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

/// Per-particle trace files p<k>.csv (time,x,z,I,I0) plus times.csv.
void write_particle_traces(const std::string& dir, const ParticleSet& ps);
ParticleSet read_particle_traces(const std::string& dir);

/// summary.csv: per-particle fraction/switches plus histogram rows.
void write_exposure_stats(const std::string& path, const ExposureStats& st);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace raceway
