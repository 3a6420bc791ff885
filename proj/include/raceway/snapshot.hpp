#pragma once

#include <vector>

#include "raceway/field.hpp"

namespace raceway {

/// Column-complete state record at one instant: water height per cell and
/// all per-(layer, cell) fields, with the diagnostic vertical velocity,
/// density and layer-midpoint light.
struct SnapshotRecord {
  double time = 0.0;
  double I0 = 0.0;  // incident surface light at `time`
  std::vector<double> H;
  Field u, w, T, rho, c1, c2, c3, light;
};

}  // namespace raceway
