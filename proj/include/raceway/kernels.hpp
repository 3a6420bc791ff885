#pragma once

namespace raceway::kernels {

inline constexpr double kSqrt3 = 1.7320508075688772;        // sqrt(3) to double precision
inline constexpr double kInv2Sqrt3 = 0.28867513459481287;   // 1 / (2 sqrt(3))

/// Kinetic equilibrium profile: chi(w) = 1/(2 sqrt(3)) on |w| <= sqrt(3),
/// zero outside. Unit mass and unit second moment.
inline double chi(double w) { return (w >= -kSqrt3 && w <= kSqrt3) ? kInv2Sqrt3 : 0.0; }

/// Half-fluxes of the kinetic scheme for one layer row.
///
/// For each cell j with layer mass h[j], velocity u[j] and kinetic speed
/// c[j] = sqrt(p/rho0), computes the four moments
///   fph = int_{xi>=0} xi M dxi      fpq = int_{xi>=0} xi^2 M dxi
///   fmh = int_{xi<0}  xi M dxi      fmq = int_{xi<0}  xi^2 M dxi
/// where M(xi) = (h/c) chi((xi-u)/c). The integration limit is clamped to
/// the chi support, which covers the three regimes (fully left-going,
/// mixed, fully right-going) in one expression; c = 0 degenerates to plain
/// upwinding of (hu, hu^2).
using HalfFluxFn = void (*)(int n, const double* h, const double* u, const double* c,
                            double* fph, double* fpq, double* fmh, double* fmq);

void half_fluxes_scalar(int n, const double* h, const double* u, const double* c,
                        double* fph, double* fpq, double* fmh, double* fmq);
void half_fluxes_avx2(int n, const double* h, const double* u, const double* c,
                      double* fph, double* fpq, double* fmh, double* fmq);

bool cpu_has_avx2();

/// Active kernel for this host; AVX2 when the CPU supports it unless
/// force_scalar is set. Both variants produce bit-identical results.
HalfFluxFn select_half_flux_kernel(bool force_scalar = false);
const char* half_flux_kernel_name(HalfFluxFn fn);

}  // namespace raceway::kernels
