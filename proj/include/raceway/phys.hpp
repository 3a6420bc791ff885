#pragma once

#include <span>
#include <vector>

namespace raceway {

/// Physical constants and transport coefficients.
struct PhysParams {
  double g = 9.81;          // m s^-2
  double rho0 = 1000.0;     // reference density, kg m^-3
  double T0 = 4.0;          // temperature of maximum density, C
  double alpha_T = 6.63e-6; // C^-2, quadratic equation-of-state coefficient
  double mu = 0.0;          // vertical momentum viscosity, m^2 s^-1
  double kappa = 0.0;       // bottom friction (wall law), m s^-1
  double mu_T = 0.0;        // tracer diffusivity, m^2 s^-1
  double mu_C = 0.0;        // biology diffusivity, m^2 s^-1

  void validate() const;
};

/// rho(T) = rho0 (1 - alpha_T (T - T0)^2)
inline double density_of_tracer(const PhysParams& p, double T) {
  const double d = T - p.T0;
  return p.rho0 * (1.0 - p.alpha_T * d * d);
}

/// Hydrostatic pressure of one column, with optional vertical-force terms.
///
/// Inputs are per-layer densities and thicknesses (bottom to surface).
/// fz_layer_dbl[a]  = nested integral of F_z over layer a, i.e.
///                    int_{z_{a-1/2}}^{z_{a+1/2}} int_z^eta F_z dz' dz,
/// fz_iface_int[k]  = int_{z_k}^{eta} F_z dz at interface k (k = 0 bottom,
///                    k = N surface). Pass empty spans when no force acts.
///
/// Outputs:
///   p_layer[a] = g (rho_a h_a / 2 + sum_{j>a} rho_j h_j) - fz_layer_dbl[a]/h_a
///   p_iface[k] = g sum_{j>=k} rho_j h_j - fz_iface_int[k]
/// A dry layer (h_a = 0) gets a zero force contribution.
void pressure_profile(double g, std::span<const double> rho, std::span<const double> h,
                      std::span<const double> fz_layer_dbl,
                      std::span<const double> fz_iface_int,
                      std::span<double> p_layer, std::span<double> p_iface);

/// Diagnostic vertical velocity of one column from the identity
///   d/dt[(z_{a+1/2}^2 - z_{a-1/2}^2)/2] + d/dx[(z_{a+1/2}^2 - z_{a-1/2}^2)/2 u_a]
///     = h_a w_a + z_{a+1/2} G_{a+1/2} - z_{a-1/2} G_{a-1/2}.
///
/// The time derivative is a backward difference between the previous and
/// current interfaces; the x derivative of the transport term is supplied by
/// the caller (centered over neighbouring columns). Dry layers get w = 0.
///
///   z_prev, z_now : n_layers+1 interface heights at t-dt and t
///   ddx_zzu       : per-layer centered x-derivative of (z+^2 - z-^2)/2 * u
///   G             : n_layers+1 interface exchange rates (m/s)
void reconstruct_column_w(std::span<const double> z_prev, std::span<const double> z_now,
                          std::span<const double> ddx_zzu, std::span<const double> G,
                          double dt, double dry_h, std::span<double> w);

}  // namespace raceway
