#include "raceway/writers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace raceway {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string snapshot_filename(double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%013.6f.csv", time);
  return buf;
}

void write_snapshot_csv(const std::string& path, const GridSpec& grid,
                        const SnapshotRecord& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "time,cell,layer,x,z_mid,H,u,w,T,rho,c1,c2,c3,I\n";
  for (int i = 0; i < grid.n_cells; ++i) {
    for (int a = 0; a < grid.n_layers; ++a) {
      const double zm = grid.z_bed[i] +
                        0.5 * (grid.frac_cum[a] + grid.frac_cum[a + 1]) * s.H[i];
      out << fmt(s.time) << ',' << i << ',' << a << ',' << fmt(grid.x_center[i]) << ','
          << fmt(zm) << ',' << fmt(s.H[i]) << ',' << fmt(s.u.at(a, i)) << ','
          << fmt(s.w.at(a, i)) << ',' << fmt(s.T.at(a, i)) << ',' << fmt(s.rho.at(a, i))
          << ',' << fmt(s.c1.at(a, i)) << ',' << fmt(s.c2.at(a, i)) << ','
          << fmt(s.c3.at(a, i)) << ',' << fmt(s.light.at(a, i)) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

SnapshotRecord read_snapshot_csv(const std::string& path, const GridSpec& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty snapshot " + path);

  SnapshotRecord s;
  s.H.assign(grid.n_cells, 0.0);
  s.u = Field(grid.n_layers, grid.n_cells);
  s.w = Field(grid.n_layers, grid.n_cells);
  s.T = Field(grid.n_layers, grid.n_cells);
  s.rho = Field(grid.n_layers, grid.n_cells);
  s.c1 = Field(grid.n_layers, grid.n_cells);
  s.c2 = Field(grid.n_layers, grid.n_cells);
  s.c3 = Field(grid.n_layers, grid.n_cells);
  s.light = Field(grid.n_layers, grid.n_cells);

  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 14) throw std::runtime_error("bad snapshot row in " + path);
    const int i = std::stoi(f[1]);
    const int a = std::stoi(f[2]);
    if (i < 0 || i >= grid.n_cells || a < 0 || a >= grid.n_layers)
      throw std::runtime_error("snapshot row out of range in " + path);
    s.time = std::stod(f[0]);
    s.H[i] = std::stod(f[5]);
    s.u.at(a, i) = std::stod(f[6]);
    s.w.at(a, i) = std::stod(f[7]);
    s.T.at(a, i) = std::stod(f[8]);
    s.rho.at(a, i) = std::stod(f[9]);
    s.c1.at(a, i) = std::stod(f[10]);
    s.c2.at(a, i) = std::stod(f[11]);
    s.c3.at(a, i) = std::stod(f[12]);
    s.light.at(a, i) = std::stod(f[13]);
    ++rows;
  }
  if (rows != static_cast<long>(grid.n_cells) * grid.n_layers)
    throw std::runtime_error("snapshot " + path + " is not column-complete");
  // incident light: recover from the top layer is lossy, so derive from the
  // stored top-layer value only when needed; callers normally set it
  s.I0 = 0.0;
  return s;
}

TimeseriesWriter::TimeseriesWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  out_ << "time,volume,H_mean,u_mean,speed_mean,T_mean,c1_mean,c2_mean,c3_mean,q_bulk\n";
}

void TimeseriesWriter::row(const Solver& s) {
  const GridSpec& g = s.grid();
  double vol = 0.0, hm = 0.0, um = 0.0, sp = 0.0, tm = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    const double H = s.height().at(0, i);
    hm += H;
    for (int a = 0; a < g.n_layers; ++a) {
      const double hv = g.layer_fraction[a] * H * g.dx[i];
      vol += hv;
      um += hv * s.u().at(a, i);
      sp += hv * std::abs(s.u().at(a, i));
      tm += hv * s.tracer().at(a, i);
      m1 += hv * s.bio(1).at(a, i);
      m2 += hv * s.bio(2).at(a, i);
      m3 += hv * s.bio(3).at(a, i);
    }
  }
  const double inv = vol > 0.0 ? 1.0 / vol : 0.0;
  const double c1m = m1 * inv;
  out_ << fmt(s.time()) << ',' << fmt(vol) << ',' << fmt(hm / g.n_cells) << ','
       << fmt(um * inv) << ',' << fmt(sp * inv) << ',' << fmt(tm * inv) << ',' << fmt(c1m)
       << ',' << fmt(m2 * inv) << ',' << fmt(m3 * inv) << ','
       << fmt(c1m > 0.0 ? (m2 * inv) / c1m : 0.0) << '\n';
}

void write_particle_traces(const std::string& dir, const ParticleSet& ps) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (int k = 0; k < ps.count(); ++k) {
    std::ofstream out(dir + "/p" + std::to_string(k) + ".csv");
    if (!out) throw std::runtime_error("cannot write particle trace in " + dir);
    out << "time,x,z,I,I0\n";
    for (size_t sIdx = 0; sIdx < ps.sample_time.size(); ++sIdx)
      out << fmt(ps.sample_time[sIdx]) << ',' << fmt(ps.trace_x[k][sIdx]) << ','
          << fmt(ps.trace_z[k][sIdx]) << ',' << fmt(ps.light[k][sIdx]) << ','
          << fmt(ps.sample_I0[sIdx]) << '\n';
  }
}

ParticleSet read_particle_traces(const std::string& dir) {
  namespace fs = std::filesystem;
  ParticleSet ps;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string n = e.path().filename().string();
    if (n.size() > 5 && n[0] == 'p' && n.substr(n.size() - 4) == ".csv")
      files.push_back(e.path());
  }
  if (files.empty()) throw std::runtime_error("no particle traces (p*.csv) in " + dir);
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return std::stoi(a.filename().string().substr(1)) <
           std::stoi(b.filename().string().substr(1));
  });
  bool first = true;
  for (const auto& p : files) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, zs, Is;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 5) throw std::runtime_error("bad trace row in " + p.string());
      if (first) {
        ps.sample_time.push_back(std::stod(f[0]));
        ps.sample_I0.push_back(std::stod(f[4]));
      }
      xs.push_back(std::stod(f[1]));
      zs.push_back(std::stod(f[2]));
      Is.push_back(std::stod(f[3]));
    }
    if (!first && Is.size() != ps.sample_time.size())
      throw std::runtime_error("trace length mismatch in " + p.string());
    ps.trace_x.push_back(std::move(xs));
    ps.trace_z.push_back(std::move(zs));
    ps.light.push_back(std::move(Is));
    first = false;
  }
  const int n = static_cast<int>(ps.light.size());
  ps.x.resize(n);
  ps.z.resize(n);
  for (int k = 0; k < n; ++k) {
    ps.x[k] = ps.trace_x[k].empty() ? 0.0 : ps.trace_x[k].back();
    ps.z[k] = ps.trace_z[k].empty() ? 0.0 : ps.trace_z[k].back();
  }
  return ps;
}

void write_exposure_stats(const std::string& path, const ExposureStats& st) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "defined," << (st.defined ? 1 : 0) << "\n";
  out << "mean_fraction," << fmt(st.mean_fraction) << "\n";
  out << "never_high," << st.never_high << "\n";
  out << "particle,fraction,switches\n";
  for (size_t k = 0; k < st.fraction.size(); ++k)
    out << k << ',' << fmt(st.fraction[k]) << ',' << st.switches[k] << '\n';
  out << "class_lo_pct,class_hi_pct,count\n";
  for (int b = 0; b < 20; ++b)
    out << 5 * b << ',' << 5 * (b + 1) << ',' << st.histogram[b] << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

}  // namespace raceway
