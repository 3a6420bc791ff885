#pragma once

#include <array>
#include <cmath>
#include <span>

namespace raceway {

/// Droop model with light limitation and photoinhibition.
///
/// State per layer: C1 = carbon biomass (gC m^-3), C2 = particulate
/// nitrogen (gN m^-3), C3 = dissolved nitrate (gN m^-3). The cell quota
/// q = C2/C1 drives growth; uptake is down-regulated as q approaches Q_l.
/// Light decays with depth through chlorophyll (proportional to C2 via
/// the photoacclimation factor gamma) plus a background attenuation.
struct BioParams {
  double mu_tilde = 1.7;     // day^-1, growth scale
  double Q0 = 0.050;         // gN/gC, subsistence quota
  double Q_l = 0.25;         // gN/gC, maximal quota
  double K_iI = 295.0;       // umol m^-2 s^-1, photoinhibition constant
  double K_sI = 70.0;        // umol m^-2 s^-1, light half saturation
  double lambda_bar = 0.073; // gN/gC/day, max uptake
  double K3 = 0.0012;        // gN m^-3, substrate half saturation
  double R = 0.0081;         // day^-1, respiration/mortality
  double I0_max = 500.0;     // umol m^-2 s^-1
  double gamma_star = 0.25;  // gChl/gN, chlorophyll:nitrogen ratio (fixed per run)
  double k_Istar = 0.0;      // umol m^-2 s^-1; optional, for gamma_of_Istar
  double atten_a = 16.2;     // m^2/gChl
  double atten_b = 0.087;    // m^-1
  double time_offset_days = 0.0;  // shifts the diurnal phase of t = 0

  void validate() const;
};

/// Incident surface light at time t in days; day/night sinusoid clipped at 0.
inline double surface_light(const BioParams& p, double t_days);

/// Photoacclimation factor as a function of the previous day's mean light.
/// Runs normally take gamma_star from the configuration instead.
double gamma_of_Istar(const BioParams& p, double I_star);

/// Growth rate (day^-1), Peeters-Eilers light response times the Droop
/// quota factor. Negative below the subsistence quota. Throws
/// std::domain_error for q <= 0.
double growth_rate(const BioParams& p, double q, double I);

/// Nitrate uptake rate (gN/gC/day), zero when the quota is full.
double uptake_rate(const BioParams& p, double C3, double q);

/// Reaction rates (dC1, dC2, dC3) per day. Zero biomass reacts not at all.
std::array<double, 3> reaction_rates(const BioParams& p, double C1, double C2, double C3,
                                     double I);

/// Light at layer midpoints for one column. Arrays are ordered bottom to
/// surface (layer 0 at the bed), matching the solver's storage; the optical
/// depth accumulates downward from the free surface.
void light_column(const BioParams& p, double I0, std::span<const double> C2,
                  std::span<const double> h, std::span<double> I_out);

inline double surface_light(const BioParams& p, double t_days) {
  const double s = std::sin(2.0 * 3.141592653589793 * t_days);
  return p.I0_max * (s > 0.0 ? s : 0.0);
}

}  // namespace raceway
