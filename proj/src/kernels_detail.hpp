#pragma once

#include <algorithm>

#include "raceway/kernels.hpp"

namespace raceway::kernels::detail {

// Reference element computation. The AVX2 body mirrors this operation
// order exactly; keep the two in sync (the equivalence tests compare
// bitwise).
inline void half_flux_one(double h, double u, double c, double& fph, double& fpq,
                          double& fmh, double& fmq) {
  const double safe_c = std::max(c, 1e-300);  // keeps u/c well defined when c = 0
  const double a = std::min(kSqrt3, std::max(-kSqrt3, 0.0 - (u / safe_c)));
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double k = kInv2Sqrt3 * h;
  const double uu = u * u;
  const double uc = u * c;
  const double cc = c * c;
  const double dp = kSqrt3 - a;
  const double wp = 3.0 - a2;
  const double dm = a + kSqrt3;
  const double wm = a2 - 3.0;
  const double s3x3 = 3.0 * kSqrt3;
  fph = k * (u * dp + c * (0.5 * wp));
  fpq = k * (uu * dp + uc * wp + cc * ((s3x3 - a3) * (1.0 / 3.0)));
  fmh = k * (u * dm + c * (0.5 * wm));
  fmq = k * (uu * dm + uc * wm + cc * ((a3 + s3x3) * (1.0 / 3.0)));
}

}  // namespace raceway::kernels::detail
