#pragma once

#include <functional>
#include <vector>

namespace raceway {

/// 1D horizontal mesh plus the vertical layer decomposition.
///
/// The water column above each cell is split into n_layers layers whose
/// thicknesses are fixed fractions of the local water height H:
///   z_{a+1/2}(x) = z_b(x) + (l_1 + ... + l_a) H(x),   h_a = l_a H.
/// Layer index 0 is the bottom layer, n_layers-1 the surface layer.
struct GridSpec {
  double domain_length = 0.0;
  int n_cells = 0;
  int n_layers = 0;
  std::vector<double> x_center;        // cell centers, strictly increasing
  std::vector<double> dx;              // cell widths, > 0
  std::vector<double> z_bed;           // topography sampled at cell centers
  std::vector<double> z_bed_ghost;     // samples at the 2+2 virtual ghost centers
  std::vector<double> layer_fraction;  // l_a, positive, sums to 1
  std::vector<double> frac_cum;        // partial sums, frac_cum[0]=0 .. frac_cum[N]=1

  double z_interface(int cell, int iface, double H) const {
    return z_bed[cell] + frac_cum[iface] * H;
  }
};

/// Interfaces and thicknesses of one water column.
struct LayerGeometry {
  std::vector<double> z_interface;  // n_layers + 1 values, bottom to surface
  std::vector<double> thickness;    // n_layers values
};

using TopographyFn = std::function<double(double)>;

/// Builds a uniform mesh over [0, domain_length] with the bed sampled at
/// cell centers. Throws std::invalid_argument on bad sizes, non-normalized
/// fractions or non-finite topography samples.
GridSpec build_grid(double domain_length, int n_cells, int n_layers,
                    const std::vector<double>& layer_fractions,
                    const TopographyFn& topography);

/// Layer interfaces/thicknesses for one cell at water height H >= 0.
LayerGeometry layer_geometry(const GridSpec& grid, int cell, double H);

}  // namespace raceway
