#include "raceway/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace raceway {

GridSpec build_grid(double domain_length, int n_cells, int n_layers,
                    const std::vector<double>& layer_fractions,
                    const TopographyFn& topography) {
  if (!(domain_length > 0.0))
    throw std::invalid_argument("build_grid: domain_length must be positive");
  if (n_cells < 2) throw std::invalid_argument("build_grid: need at least 2 cells");
  if (n_layers < 1) throw std::invalid_argument("build_grid: need at least 1 layer");
  if (static_cast<int>(layer_fractions.size()) != n_layers)
    throw std::invalid_argument("build_grid: layer_fractions size mismatch");

  double sum = 0.0;
  for (double l : layer_fractions) {
    if (!(l > 0.0)) throw std::invalid_argument("build_grid: layer fractions must be positive");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("build_grid: layer fractions must sum to 1, got " +
                                std::to_string(sum));

  GridSpec g;
  g.domain_length = domain_length;
  g.n_cells = n_cells;
  g.n_layers = n_layers;
  g.layer_fraction = layer_fractions;
  g.frac_cum.resize(n_layers + 1);
  g.frac_cum[0] = 0.0;
  for (int a = 0; a < n_layers; ++a) g.frac_cum[a + 1] = g.frac_cum[a] + layer_fractions[a];
  g.frac_cum[n_layers] = 1.0;  // pin the surface interface

  const double h = domain_length / n_cells;
  auto sample = [&](double x) {
    const double zb = topography ? topography(x) : 0.0;
    if (!std::isfinite(zb))
      throw std::invalid_argument("build_grid: topography not finite at x=" +
                                  std::to_string(x));
    return zb;
  };
  g.x_center.resize(n_cells);
  g.dx.assign(n_cells, h);
  g.z_bed.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    g.x_center[i] = (i + 0.5) * h;
    g.z_bed[i] = sample(g.x_center[i]);
  }
  g.z_bed_ghost = {sample(-1.5 * h), sample(-0.5 * h), sample(domain_length + 0.5 * h),
                   sample(domain_length + 1.5 * h)};
  return g;
}

LayerGeometry layer_geometry(const GridSpec& grid, int cell, double H) {
  if (H < 0.0) throw std::invalid_argument("layer_geometry: H must be >= 0");
  LayerGeometry lg;
  const int N = grid.n_layers;
  lg.z_interface.resize(N + 1);
  lg.thickness.resize(N);
  for (int a = 0; a <= N; ++a) lg.z_interface[a] = grid.z_interface(cell, a, H);
  for (int a = 0; a < N; ++a) lg.thickness[a] = grid.layer_fraction[a] * H;
  return lg;
}

}  // namespace raceway
